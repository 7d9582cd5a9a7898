"""Holonomy of the momentum map on magnetic torus bundles.

A constant magnetic term theta on the d-torus makes the momentum map
multivalued: transporting along a loop with winding k shifts the momentum by
theta @ k.  The set of such shifts is the Hamiltonian holonomy group; the
loops producing no shift form the kernel lattice gamma_0, and the smallest
cover of the torus on which the momentum map is single-valued is T^d / gamma_0.

This script classifies three rational instances, from fully magnetic (trivial
kernel, cover R^2) to flat (full kernel, the torus itself).
"""

from momenta.scenario import build_scenario, parse_config

CASES = [
    (
        "invertible theta",
        '{"group":"torus","dim":2,"theta":[["0","1"],["-1","0"]]}',
    ),
    (
        "rank-2 theta in dimension 3",
        '{"group":"torus","dim":3,'
        '"theta":[["0","1","0"],["-1","0","0"],["0","0","0"]]}',
    ),
    (
        "flat (theta = 0)",
        '{"group":"torus","dim":2,"theta":[["0","0"],["0","0"]]}',
    ),
]


def fmt_vectors(vectors):
    return [ "(" + ", ".join(x.format() for x in v) + ")" for v in vectors ]


def main():
    for label, text in CASES:
        sc = build_scenario(parse_config(text))
        print(f"== {label}")
        print("   holonomy generators:", ", ".join(fmt_vectors(sc.holonomy_generators)))
        print("   closed subgroup:    ", sc.decomp.closed)
        print("   lattice part basis: ", ", ".join(fmt_vectors(sc.decomp.lattice_basis)) or "-")
        print("   gamma_0 basis:      ", [list(c) for c in sc.gamma0.columns] or "-")
        print("   momentum map is single-valued on:", sc.cover_descriptor.text)
        print()


if __name__ == "__main__":
    main()
