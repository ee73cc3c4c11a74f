"""
Reading and checking certificates
=================================

A verdict is only as good as its certificate.  Here we look inside one of
each kind, serialize them, and re-check them from the JSON alone.
"""
import json
from fractions import Fraction as F

from fracmetric import builtin, check_up, dp_iterate, verify_certificate

vicsek = builtin("vicsek")
alpha = (F(1, 5), F(1, 5), F(4, 5), F(4, 5), F(9, 20))

# The unit vector is not subinvariant here: crossing between neighbouring
# corners through the center cell is cheap.  The checker finds a weight
# vector u with phi(u) >= u instead.
up = check_up(vicsek, alpha)
print(up.summary())
for pair, weight in sorted(up.u.items()):
    print(f"  u{pair} = {weight}")
print("uniform lower bound c3 >=", up.c3)
print()

# A non-metric polyratio on the gasket: ratios 2/5 and 1/2 on cells 1 and 2
# sum to 9/10, so the path through those two cells keeps shrinking.
gasket = builtin("gasket")
beta = (F(2, 5), F(1, 2), F(3, 5))
down = check_up(gasket, beta)
print(down.summary())
for pair, path in down.policy.items():
    print(f"  policy for {pair}: {path.format(beta)}")
print("  v =", {k: str(x) for k, x in down.v.items()})
print()

# the exact iteration confirms the decay rate on the (1,2) coordinate
seq = dp_iterate(gasket, beta, 5)
print("g_n(1,2):", [str(g[(1, 2)]) for g in seq])
print()

# certificates survive a JSON round trip and are re-verified exactly
for spec, a, cert in ((vicsek, alpha, up), (gasket, beta, down)):
    text = json.dumps(cert.to_json())
    print(spec.name, "certificate", len(text), "bytes, valid:", verify_certificate(spec, a, text))

# tampering with the contraction factor is caught
tampered = down.to_json()
tampered["lambda"] = "1/2"
print("tampered lambda valid:", verify_certificate(gasket, beta, tampered))
