#pragma once

// Frozen high-precision values from tests/oracles/mittag_leffler_oracle.py.

namespace fracstep::testing {

struct MlReference {
  double gamma;
  double z;
  double value;
};

inline constexpr MlReference kMlGrid[] = {
    {0.25, -1, 0.46385276080171328694},
    {0.25, -3, 0.21900442756040679925},
    {0.25, -6, 0.12159223844551910903},
    {0.25, -10, 0.076237035239721635688},
    {0.25, -25, 0.031756886663453005363},
    {0.25, -100, 0.0081043462281694873391},
    {0.5, -1, 0.42758357615580700441},
    {0.5, -3, 0.17900115118138995042},
    {0.5, -6, 0.092776567800538354389},
    {0.5, -10, 0.056140992743822585858},
    {0.5, -25, 0.022549572432641358944},
    {0.5, -100, 0.0056416137829894329036},
    {0.75, -1, 0.39310830281575406177},
    {0.75, -3, 0.12585513691184152704},
    {0.75, -6, 0.054769079138758550245},
    {0.75, -10, 0.030643250976059637773},
    {0.75, -25, 0.011500180787169600566},
    {0.75, -100, 0.0027866210194390933563},
    {0.9, -1, 0.37606602142464188118},
    {0.9, -3, 0.08388835403377326904},
    {0.9, -6, 0.025782769712366070335},
    {0.9, -10, 0.012820606051102102705},
    {0.9, -25, 0.0045121471218401897739},
    {0.9, -100, 0.001068972418287089285},
};

// E_{1/2}(-x) = exp(x^2) erfc(x), erfc by quadrature.
inline constexpr MlReference kMlErfc[] = {
    {0.5, -0.5, 0.61569034419292587487},
    {0.5, -1, 0.42758357615580700441},
    {0.5, -2, 0.25539567631050574387},
    {0.5, -4, 0.13699945762506138989},
};

inline constexpr double kMl075At50 = 0.0056311878629451302351;
inline constexpr double kMlHalfAtPi2Sqrt05 = 0.080037013875985906562;

// u(1/2, 1/2) for u(x, 0) = x (1 - x), K = 1.
inline constexpr double kExactHalfGamma05 = 0.020570401339448509289;
inline constexpr double kExactHalfGamma1 = 0.0018555941895199065956;

}  // namespace fracstep::testing
