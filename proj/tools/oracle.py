#!/usr/bin/env python3
"""Reference values for the unit tests, computed at 50 digits with mpmath.

Usage: python3 tools/oracle.py
"""

from mpmath import mp, mpf, cbrt, sqrt, tanh, polyroots, mpc

mp.dps = 50

C = mpf(299792458)
HBAR = mpf("1.054571817e-34")
KB = mpf("1.380649e-23")
MP = mpf("1.67262192369e-27")
E = mpf("1.602176634e-19")
MU0 = mpf("1.25663706212e-6")

K = mpf(16000)
DE = mpf("0.2e-10")
DG = mpf("0.82e-10")
CP = mpf("9.1e-9")


def derived(n, T, rho, pz, mu0=MU0):
    omega = C * K
    gap = HBAR * C * K
    d0 = 2 * E * DE
    d0t = d0 * sqrt(mpf(2) / 3)
    inertia = 2 * MP * DG**2
    dn = n * tanh(gap / (KB * T))
    dave = pz * d0t
    alpha = dn * omega * dave / (n * inertia)
    beta = mu0 * C**2 * rho * dn * dave / 2
    a = cbrt(2 * beta**2 / alpha)
    t = cbrt(2 / (alpha * beta))
    return dict(
        l_c=1 / K, gap_over_kT=gap / (KB * T), d0=d0, I_w=inertia, delta_n=dn,
        alpha=alpha, beta=beta, a_scale=a, t_scale=t,
        c_A=a / (cbrt(rho**2) * cbrt(pz)), c_t=t * cbrt(rho) * cbrt(pz**2),
    )


def main():
    rho = mpf("6.022e23")
    for label, pz in (("P_z = 0.1", mpf("0.1")), ("E0z = 1e6", CP * mpf("1e6"))):
        print(f"# n = 30, T = 300 K, rho = 6.022e23, {label}")
        for k, v in derived(30, 300, rho, pz).items():
            print(f"{k:12s} {mp.nstr(v, 17)}")
    shifted = derived(30, 300, rho, CP * mpf("1e6"), mu0=MU0 * mpf("1.1"))
    base = derived(30, 300, rho, CP * mpf("1e6"))
    print("# mu0 x 1.1")
    print(f"c_A shift    {mp.nstr(shifted['c_A'] / mpf('2.6e-22') - 1, 6)}")
    print(f"c_t shift    {mp.nstr(shifted['c_t'] / mpf('2.4e-4') - 1, 6)}")
    print(f"c_A ratio    {mp.nstr(shifted['c_A'] / base['c_A'], 17)}")
    print("# roots of lambda^3 = i")
    for r in polyroots([1, 0, 0, mpc(0, -1)]):
        print(mp.nstr(r, 17))


if __name__ == "__main__":
    main()
