#!/usr/bin/env python3
"""Smoke test for the permcover extension module.

Build the module first (see build.sh in this directory), then run this
script from the same directory.
"""
import sys

import permcover as pc


def check(name, condition):
    status = "ok" if condition else "FAIL"
    print(f"{status:4} {name}")
    if not condition:
        sys.exit(1)


# permutations and their basic statistics
p12 = pc.seed_triangle_3()
check("seed parses to length 12", len(p12) == 12)
check("lis/lds of the length-12 seed", (p12.lis(), p12.lds()) == (4, 4))
p15 = pc.seed_sharp_2_2()
check("lis/lds of the length-15 seed", (p15.lis(), p15.lds()) == (3, 6))

a = pc.Permutation([1, 3, 2])
b = pc.Permutation([2, 1])
check("direct sum", a.direct_sum(b).values() == [1, 3, 2, 5, 4])
check("skew sum", a.skew_sum(b).values() == [3, 5, 4, 2, 1])
check("tensor", a.tensor(b).values() == [2, 1, 6, 5, 4, 3])
check("pattern containment witness",
      p12.contains(pc.Permutation([2, 1, 4, 3, 6, 5])) == [2, 3, 4, 9, 10, 11])
check("orbit size of the symmetric seed", len(p12.orbit()) == 2)

# downsets
t3 = pc.Downset.triangle(3)
check("triangle columns", t3.columns() == [4, 3, 2, 1])
check("triangle as a skew merge",
      pc.Downset.triangle(2).skew_sum(pc.Downset([4])) == t3)
check("merge sizes add", t3.direct_sum(t3).size() == 20)
check("splitting count of the unit triangle",
      len(pc.Downset.triangle(1).splittings("direct")) == 2)

# the solver: decisions, certificates, downsets, criticality
solver = pc.Solver()
check("not (1,2)-coverable", not solver.decide(pc.Permutation.parse("2 1 4 3 6 5"), 1, 2))
cover = solver.is_rs_coverable(pc.Permutation.parse("2 1 4 3 6 5"), 2, 1)
check("certificate present and total", cover is not None and len(cover) == 6)
check("non-coverability downset of the seed", solver.non_cover_downset(p12) == t3)
check("seed is 3-critical", solver.is_critical(p12, t3) == "critical")
check("seed is triangle-minimal", solver.is_minimal(p12, t3))
check("length-15 seed is (2,2)-sharp", solver.is_sharp(p15, 2, 2))
padded = p12.direct_sum(pc.Permutation([1]))
check("criticalize strips the padding", solver.criticalize(padded, t3) == p12)

# separable machinery
check("2 1 4 3 decomposes", pc.decompose(pc.Permutation([2, 1, 4, 3])) == "((1 - 1) + (1 - 1))")
check("3 1 4 2 is not separable", pc.decompose(pc.Permutation([3, 1, 4, 2])) is None)
check("tree downset equals target", pc.separable_downset(pc.Permutation([1, 3, 2, 6, 5, 4]))
      == pc.Downset.triangle(2))
ones = pc.enumerate_critical(pc.Downset.triangle(1))
check("unit-triangle separable criticals",
      [q.values() for q in ones] == [[1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2]])

# constructions
step = pc.minimal_step(p12, 3)
check("step length", step.length == 17 and len(step.permutation) == 17)
check("step verified minimal", solver.is_minimal(step.permutation, step.target))
fam = pc.minimal_family(4)
check("family member at k=4", fam.length == 17)
square = pc.sharp_tensor(pc.Permutation([2, 1, 4, 3]), 2, 2, pc.Permutation([2, 1, 4, 3]), 2, 2)
check("tensor square is (3,3)-sharp", solver.is_sharp(square.permutation, 3, 3))

# bounds
check("threshold value", pc.n_upper(2, 4) == 128)
check("critical upper bound", pc.c_rs_upper(2, 1) == 128)
check("summed upper bound", pc.c_k_upper(3) == 264)
check("big upper bound is exact", pc.c_k_upper(12) == sum(pc.c_rs_upper(r, 12 - r) for r in range(13)))
tables = pc.LowerBounds(100, 20)
check("minimal table", tables.minimal_lb(4) == 17)
check("rs seed in the table", tables.critical_rs_lb(2, 1) == 9)
check("gadget verifies", pc.gadget_verify(2, 2))

# search
hits = pc.search_critical(pc.Downset.rectangle(1, 1), 5, symmetry=False)
check("split search hits", [h.values() for h in hits] == [[2, 1, 4, 3], [3, 4, 1, 2]])
canon = pc.canonical_representative(pc.seed_rect_2_1(), pc.Downset.rectangle(2, 1))
check("canonical representative is in the orbit",
      canon in pc.preserving_images(pc.seed_rect_2_1(), pc.Downset.rectangle(2, 1)))

print("all smoke checks passed")
