#ifndef ORBITCONE_BUILTIN_SPECS_HPP
#define ORBITCONE_BUILTIN_SPECS_HPP

#include <string>
#include <vector>

#include "orbitcone/algebra.hpp"

namespace orbitcone {

/// sl(2,R) in the coordinates X_{x,y,z} = [[x, y-z], [y+z, -x]].
/// Cartan reps: "t" (rotation direction) and "a" (diagonal direction).
SpecPtr make_sl2();

/// k-fold product of sl(2,R), realized block diagonally.
SpecPtr make_sl2_product(int k);

/// su(2) realized as left multiplication by imaginary quaternions on R^4.
SpecPtr make_su2();

/// so(2) (one rotation generator).
SpecPtr make_so2();

/// Upper triangular subalgebra b = span{H, E} of sl(2,R), as its own spec.
SpecPtr make_borel_sl2();

/// Nilpotent line n = span{E}, as its own spec.
SpecPtr make_nilpotent_sl2();

/// sp(2n,R) with the symplectic form [[0, I], [-I, 0]].
SpecPtr make_sp(int n);

/// so(p,q) with the form diag(I_p, -I_q).
SpecPtr make_so_pq(int p, int q);

/// Look up a builtin spec by name ("sl2", "sl2x2", "sl2x3", "su2", "so2",
/// "b_sl2", "n_sl2", "sp2", "sp4", "sp6", "sp8", "so23").
SpecPtr builtin_spec(const std::string& name);

// -- subalgebra coordinate sets ----------------------------------------------

/// n = span{E} inside sl(2,R).
std::vector<Vec> sl2_n_subalgebra();
/// b = span{H, E} inside sl(2,R).
std::vector<Vec> sl2_b_subalgebra();
/// Whole algebra as its own subalgebra.
std::vector<Vec> full_subalgebra(const SpecPtr& spec);
/// Diagonal copy of the factor inside a k-fold product spec.
std::vector<Vec> product_diagonal_subalgebra(const SpecPtr& product, int k);
/// sp(2m) block inside sp(2n) (acting on the first m symplectic pairs).
std::vector<Vec> sp_block_subalgebra(int n, int m);
/// Complementary subspace q: sp(2n) matrices vanishing on the sp(2m) entries.
std::vector<Vec> sp_block_complement(int n, int m);
/// u(r,s) embedded in so(p,q) through C^{r,s} = R^{2r,2s} (needs 2r <= p,
/// 2s <= q).
std::vector<Vec> u_rs_in_so_pq(int p, int q, int r, int s);
/// Circle subalgebra of su(2) (span of the first quaternion unit).
std::vector<Vec> su2_t_subalgebra();

/// Named subalgebra lookup used by the CLI: "n"/"b"/"full" on sl2, "diag" on
/// products, "sp<2m>" on sp specs, "u11" on so23, "t" on su2.
std::vector<Vec> builtin_subalgebra(const SpecPtr& spec, const std::string& name);

}  // namespace orbitcone

#endif
