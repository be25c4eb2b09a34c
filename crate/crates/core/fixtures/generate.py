"""Regenerate the committed integral fixtures.

Requires pyscf. Integrals are in the canonical RHF molecular-orbital basis.
Writes an FCIDUMP (chemists' notation, 8-fold symmetry) plus a split-integral
sidecar with the kinetic and nuclear-attraction parts of the core Hamiltonian.
"""
import numpy as np
from pyscf import gto, scf, ao2mo
from pyscf.tools import fcidump

SYSTEMS = {
    "he_631g": "He 0 0 0",
    "h2_631g_r1.4": "H 0 0 0; H 0 0 1.4",
}


def write_split(path, kin, pot):
    norb = kin.shape[0]
    with open(path, "w") as f:
        for tag, mat in (("KINETIC", kin), ("POTENTIAL", pot)):
            f.write(f"&{tag}\n")
            for i in range(norb):
                for j in range(i + 1):
                    if abs(mat[i, j]) > 1e-14:
                        f.write(f"{mat[i, j]: .16e} {i + 1:3d} {j + 1:3d}\n")
            f.write("&END\n")


for name, atom in SYSTEMS.items():
    mol = gto.M(atom=atom, basis="6-31g", unit="Bohr", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    c = mf.mo_coeff
    norb = c.shape[1]
    kin = c.T @ mol.intor("int1e_kin") @ c
    pot = c.T @ mol.intor("int1e_nuc") @ c
    eri = ao2mo.full(mol, c)
    fcidump.from_integrals(
        f"{name}.fcidump", kin + pot, eri, norb, mol.nelectron,
        nuc=mol.energy_nuc(), ms=0, tol=1e-14, float_format=" %.16e",
    )
    write_split(f"{name}.split", kin, pot)
