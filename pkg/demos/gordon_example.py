"""Gordon scan of the two-frequency example built on a Liouville number.

Prints the certified convergents, the offsets p_m - alpha q_m, and the
distance and weighted columns for a few weights C.

    python demos/gordon_example.py [m_max]
"""

import sys

from sturmgordon import example_triple, quasiperiodic_scan


def main(m_max=4):
    qp = example_triple(B=1.0, m_max=m_max, h=1e-3)
    num = qp.alpha
    print(f"alpha = {float(num):.17g} (quotients {list(num.partial_quotients[:m_max + 1])})")
    print(f"sampling step h = {qp.h:.3g}, L1 sampling error per unit <= {qp.sampling_error_bound:.3g}")
    for m, (p, q) in enumerate(num.convergents, start=1):
        print(f"  m={m}: p/q = {p}/{q}  offset = {float(num.offset(m)):+.3e}")
    for C in (1.0, 5.0, 25.0):
        rep = quasiperiodic_scan(qp, C)
        print(f"C = {C:g}: verdict {rep.verdict}, C_hat = {rep.C_hat:.3g}")
        for p, d, lw in zip(rep.periods, rep.distances, rep.log_weighted):
            print(f"    p = {p:4g}  D = {d:.4g}  log(e^(Cp) D) = {lw:.4g}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:2]))
