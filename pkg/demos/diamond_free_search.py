"""Exact extremal numbers on tiny cubes, then a large diamond-free family."""
from posetfree import boolean_poset, chain, la_star_exact, lubell_sup_exact
from posetfree import b2_lower, is_p_free, lubell_mass, PartitionSpec
from posetfree.numeric import maximize_b2_lower

# largest antichain in B_n by branch and bound; compare with the middle binomial
for n in range(1, 6):
    res = la_star_exact(n, chain(2))
    print(f"n={n}: antichain size {res.optimum} after {res.nodes_explored} nodes")

# the Lubell objective for diamond-free families stops growing at 8/3
diamond = boolean_poset(2)
for n in range(1, 5):
    print(f"n={n}: best diamond-free Lubell mass {lubell_sup_exact(n, diamond).optimum}")

# a three-block construction; its normalized mass tends to a cubic on the simplex
value, x = maximize_b2_lower()
print("cubic maximum", float(value), "at", [round(float(t), 4) for t in x])

part = PartitionSpec.from_fractions(14, *x)
F = b2_lower(14, part)
print(f"partition {part}: {len(F)} members, mass {float(lubell_mass(F)):.4f}, "
      f"diamond-free {is_p_free(F, diamond)}")
