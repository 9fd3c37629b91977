# Generated by tests/_gen_frozen.py -- do not edit by hand.
# High-precision pins for unit tests (30-digit mpmath upstream).

THETA_DEFAULT = 0.5  # 2(alpha+beta-1) at alpha=.75, beta=.5
KAPPA0_DEFAULT = 0.75
KAPPA_GAMMA_DEFAULT = 0.85714285714285714  # gamma=0.25
S_PHASE_DEFAULT = 0.58333333333333333  # 1/(2 kappa_gamma)
SIGMA_D1 = 0.56418958354775629  # equals 1/sqrt(pi)
SIGMA_D2 = 0.21517055665853653  # sphere factor cross-checked vs 2 B(3/4,1/2)
SPHERE_ABS_MOMENT_D2 = 4.7925609389423688
DAMPING_RATE_D1 = 1.5957691216057307  # equals 2 sqrt(2/pi)
DAMPING_OVER_SIGMA = 2.8284271247461901  # cos(pi theta/2)/theta^2 = 2 sqrt(2)
COS_MOMENT_C_HALF = 2.5066282746310005
SPATIAL_SPECTRUM_A1_P2 = 0.70710678118654752  # p^{-(d+2a-2)} at p=2, flat envelope
TRANSFER_KERNEL_P1 = 0.31830988618379067  # 2/(2 pi) at p=1, flat envelope
COV_T1_X0 = 0.43558379670001233  # R(1,0), gaussian envelope, defaults
COV_T0_X0 = 0.57703373861646968  # R(0,0)
COV_T0_X2 = 0.37967915385151317
COV_BAND_T0_X0 = 0.37611489531719338  # band [0.1,3]
COV_BAND_T2_X1 = 0.15506582227879885
D_GENERIC_DEFAULT = 1.5045055561273501  # 2 sqrt(pi) / (2 pi k0 (2k0-1))
D_SPECIAL_K0 = 1.5045055561273501  # momentum-dependent variant at k=0 (= generic)
D_SPECIAL_K1 = 1.168830788447132
PSI_GAUSS_Q10 = -3.4731501333803083
PSI_RATIO_Q10 = 0.6882615366155067  # jump exponent over -damping_rate*q^theta
PSI_GAUSS_Q30 = -7.177705467080316
PSI_RATIO_Q30 = 0.82121136076211966  # jump exponent over -damping_rate*q^theta
PSI_GAUSS_Q100 = -14.397043194578295
PSI_RATIO_Q100 = 0.90220088856534448  # jump exponent over -damping_rate*q^theta
PSI_GAUSS_Q2 = -0.62296142376846998
PSI_CUT_Q2_D005 = -0.61348479971667436
PSI_CUT_Q5_D005 = -1.9097156225700221
JUMP_RATE_D005 = 4.1385938859409044
JUMP_RATE_D02 = 1.3244392017880282
STABLE_HALF_T1_K0 = 0.63661977236758134  # (1/pi) int e^{-sqrt(q)} dq = 2/pi
