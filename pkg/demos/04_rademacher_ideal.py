"""
The Rademacher ideal
====================

Block Rademacher vectors in l1: the table of the first ten, orthogonality,
the sign-pattern bound and the exact submeasure.
"""
from pideals import BlockLayout, jr_submeasure, khintchine_check, rademacher_vector
from pideals.rademacher import sign_sweep, sign_sweep_bound, x_vector

for i in range(10):
    print(f"r_{i} =", [str(v) for v in rademacher_vector(i)])

# block n holds n+1 vectors scaled by 1/n, each of l1 norm 1/n
for n in range(1, 5):
    print(f"block {n}: indices {list(BlockLayout(n).P)}, "
          f"||x_i||_1 = {x_vector(BlockLayout(n).P.start).norm()}")

# every sign pattern of block 8 obeys the squared bound (n+1)/n^2
worst = max(sq for _, sq in sign_sweep(8))
print("block 8 worst squared norm:", worst, "bound:", sign_sweep_bound(8))

print(khintchine_check(3, ["1", "-1/2", "2", "1/3"]).to_dict())

# the submeasure of J_R on whole blocks, from the closed form
phi = jr_submeasure()
for n in range(1, 6):
    print(f"phi(P_{n}) = {phi(BlockLayout(n).P)}")
print("phi({1,2}) =", phi([1, 2]))
