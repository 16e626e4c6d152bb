"""The scalar recursion for an infinite fully connected network.

Every node starts at load 0.8 (capacity 1) and takes one exponential
shock. The recursion tracks the load floor a_n and the per-stage failure
probability p_n. Below the critical disturbance the cascade dies out
(p_n -> 0, floor stays below 1); above it, the floor is driven to
capacity and the whole network blacks out.
"""

from gridcascade import run_recursion

A0 = 0.8

print(f"constant initial load {A0}, capacity 1\n")
for d_m in (0.030, 0.045, 0.049, 0.050, 0.055, 0.070):
    verdict, trace = run_recursion(A0, d_m)
    final = trace[-1]
    print(f"d_m = {d_m:.3f}: {verdict.value:16s} "
          f"stages = {final.n:4d}  final floor = {final.a_n:.6f}  "
          f"final p = {final.p_n:.3e}")

print("\ntrace at d_m = 0.049 (last subcritical point on a 0.001 grid):")
_, trace = run_recursion(A0, 0.049)
for s in trace[:8]:
    print(f"  stage {s.n:2d}: floor {s.a_n:.6f}  fail prob {s.p_n:.3e}  "
          f"redistributed {s.D_n:.3e}")
print(f"  ... converges after {trace[-1].n} stages")
