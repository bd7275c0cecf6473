// Generated by tests/oracles/generate.py (mpmath, 40 digits). Do not edit.
#pragma once

#include <array>

namespace oracle {

inline constexpr std::array<std::array<double, 3>, 23> kBesselJ{{
    {-0.5, 3.141592653589793, -0.45015815807855303},
    {0.5, 3.141592653589793, -1.3688988172384362e-43},
    {0.0, 0.0, 1.0},
    {0.35, 0.7, 0.7083934909254594},
    {1.85, 12.3, -0.1767630696613252},
    {0.25, 60.0, -0.06642673443898821},
    {2.2, 150.0, 0.019868995267863964},
    {1.35, 25.0, -0.15823915107282052},
    {7.5, 8.0, 0.2759399608703307},
    {0.0, 40.0, 0.00736689058423729},
    {-0.15, 0.001, 2.8109990622818413},
    {3.7, 0.05, 7.654461168442014e-08},
    {0.85, 33.3, 0.13465865125445053},
    {11.25, 14.0, 0.2577870659219631},
    {0.5, 10000.0, -0.0024384500245313917},
    {0.3, 7.999, 0.25396372962895397},
    {0.3, 8.001, 0.2536863951507945},
    {1.0, 24.99, -0.1263569850078052},
    {1.0, 25.01, -0.12433140440396809},
    {2.6, 49.5, 0.08576420724287738},
    {0.75, 50.0, -0.06874351931088632},
    {4.2, 30.0, -0.08911900874940948},
    {-0.35, 18.5, 0.1542715105456604},
}};

inline constexpr std::array<std::array<double, 3>, 16> kJKernel{{
    {1.5, 0.5, 0.9181435353053029},
    {1.5, 3.0, -0.525515795941096},
    {1.5, 17.0, -0.25360395560671983},
    {1.5, 45.0, 0.25781269630091874},
    {2.0, 0.5, 0.9384698072408129},
    {2.0, 3.0, -0.26005195490193345},
    {2.0, 17.0, -0.16985425215118355},
    {2.0, 45.0, 0.11581867067325632},
    {2.7, 0.5, 0.9543155310409548},
    {2.7, 3.0, -0.026156975019782053},
    {2.7, 17.0, -0.08144142529393207},
    {2.7, 45.0, 0.03384916403388808},
    {5.0, 0.5, 0.9752221838163995},
    {5.0, 3.0, 0.34567749976235596},
    {5.0, 17.0, 0.002269313609809235},
    {5.0, 45.0, -0.0007502415134901636},
}};

inline constexpr double kGamma03 = 2.991568987687591;
inline constexpr double kGamma45 = 11.631728396567448;
inline constexpr double kBeta075_125 = 1.1107207345395915;
inline constexpr double kKappa27 = 1.135826540982958;
inline constexpr double kC15 = 2.3962804694711846;
inline constexpr double kAcosh1p1e12 = 1.4142135623729772e-06;
inline constexpr double kOscGauss = 0.30134038892379195;
inline constexpr double kOscLorentz = 0.10235517720659942;

inline constexpr std::array<std::array<double, 3>, 5> kPsi{{
    {1.0, 0.5, 0.18181947117631217},
    {1.0, 2.0, 0.11063321756220973},
    {1.0, 10.0, 0.004225663163402822},
    {0.5, 1.0, 0.7390765313032319},
    {2.0, 3.0, 0.027784912288724734},
}};

inline constexpr std::array<std::array<double, 5>, 6> kGHeat{{
    {2.0, 1.0, 0.5, 0.3, 0.09341878458452521},
    {1.0, 0.5, 1.0, -0.5, 0.15070108041670813},
    {3.0, 2.0, 2.0, 1.0, 0.002809654968129264},
    {1.5, 1.0, 0.0, 0.0, 0.15418151641993735},
    {2.0, 0.25, 0.2, 0.1, 0.9676334757620356},
    {2.7, 1.0, 4.0, -1.0, 0.0008963106366507848},
}};

inline constexpr std::array<std::array<double, 3>, 4> kMZero{{
    {1.0, 0.0, 0.28209479177387814},
    {1.0, 1.5, 0.16073276729880184},
    {0.5, -1.0, 0.24197072451914334},
    {2.0, 0.7, 0.18762017345846893},
}};

}  // namespace oracle
