"""The weighted average of L*(f,s)L*(f,s') over Hecke eigenforms, computed
three ways: from the eigenforms (L-values and Petersson norms), from the
closed-form side, and by integrating a truncated kernel sum directly.
"""

import sys

from lkernel import kernel as K

m_max = int(sys.argv[1]) if len(sys.argv) > 1 else 60

for pt in [(12, 6.5, 2.5), (12, 5.8 + 1.2j, 3.2 - 1.2j), (16, 9.5, 3.5), (24, 13.2 + 1j, 5.8 - 1j), (12, 7, 2)]:
    p = K.validate_params(*pt)
    rep = K.verify_theorem(p)
    print(f"k={p.k} s={p.s:.3g} s'={p.sprime:.3g}")
    print(f"   eigenforms        {rep.lhs_spectral:.12g}")
    print(f"   closed form       {K.gamma_k(p.s, p.k) * rep.terms.total:.12g}")
    for name, v in rep.residuals.items():
        print(f"   {name:17s} {v:.2e}")

# the kernel is summed over matrices with entries <= m_max; the error falls
# off roughly like m_max^-3.7 at this point
p = K.validate_params(12, 6.5, 2.5)
total = K.rhs_theorem(p).total
print(f"\ntruncated kernel at {p}")
for m in (15, 30, m_max):
    v = K.mellin_lhs(p, m_max=m)
    print(f"  m_max={m:4d}  rel. error {abs(v - total) / abs(total):.2e}")
