#include "orbitcone/builtin_specs.hpp"

#include <cmath>

namespace orbitcone {

namespace {

Vec coords3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

// Real 2x2 block of a complex scalar u + iv.
Mat complex_block(double u, double v) {
  Mat b(2, 2);
  b << u, -v, v, u;
  return b;
}

}  // namespace

SpecPtr make_sl2() {
  std::vector<Mat> basis(3);
  basis[0] = (Mat(2, 2) << 1, 0, 0, -1).finished();   // x direction
  basis[1] = (Mat(2, 2) << 0, 1, 1, 0).finished();    // y direction
  basis[2] = (Mat(2, 2) << 0, -1, 1, 0).finished();   // z direction
  std::map<std::string, std::vector<Vec>> cartans;
  cartans["t"] = {coords3(0, 0, 1)};
  cartans["a"] = {coords3(1, 0, 0)};
  GroupConstraint c{"symplectic", (Mat(2, 2) << 0, 1, -1, 0).finished()};
  return std::make_shared<LieAlgebraSpec>("sl2", 2, std::move(basis), 1,
                                          std::move(cartans), c);
}

SpecPtr make_sl2_product(int k) {
  if (k < 2) throw AlgebraError("sl2 product needs k >= 2");
  SpecPtr f = make_sl2();
  const int n = 2 * k;
  std::vector<Mat> basis;
  for (int block = 0; block < k; ++block)
    for (const Mat& b : f->basis()) {
      Mat m = Mat::Zero(n, n);
      m.block(2 * block, 2 * block, 2, 2) = b;
      basis.push_back(m);
    }
  // Cartan reps: every pattern of t/a across the factors.
  std::map<std::string, std::vector<Vec>> cartans;
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::string name;
    std::vector<Vec> gens;
    for (int block = 0; block < k; ++block) {
      bool compact = ((mask >> block) & 1) == 0;
      name += compact ? 't' : 'a';
      Vec g = Vec::Zero(3 * k);
      g[3 * block + (compact ? 2 : 0)] = 1.0;
      gens.push_back(g);
    }
    cartans[name] = gens;
  }
  Mat J2 = (Mat(2, 2) << 0, 1, -1, 0).finished();
  Mat form = Mat::Zero(n, n);
  for (int block = 0; block < k; ++block)
    form.block(2 * block, 2 * block, 2, 2) = J2;
  GroupConstraint c{"symplectic", form};
  return std::make_shared<LieAlgebraSpec>("sl2x" + std::to_string(k), n,
                                          std::move(basis), k,
                                          std::move(cartans), c);
}

SpecPtr make_su2() {
  // Left multiplication by i, j, k on quaternions in the basis (1, i, j, k).
  Mat Li(4, 4), Lj(4, 4), Lk(4, 4);
  Li << 0, -1, 0, 0,
        1,  0, 0, 0,
        0,  0, 0, -1,
        0,  0, 1, 0;
  Lj << 0, 0, -1, 0,
        0, 0, 0, 1,
        1, 0, 0, 0,
        0, -1, 0, 0;
  Lk << 0, 0, 0, -1,
        0, 0, -1, 0,
        0, 1, 0, 0,
        1, 0, 0, 0;
  std::map<std::string, std::vector<Vec>> cartans;
  cartans["t"] = {coords3(1, 0, 0)};
  GroupConstraint c{"signature", Mat::Identity(4, 4)};
  return std::make_shared<LieAlgebraSpec>("su2", 4, std::vector<Mat>{Li, Lj, Lk}, 1,
                                          std::move(cartans), c);
}

SpecPtr make_so2() {
  Mat J = (Mat(2, 2) << 0, -1, 1, 0).finished();
  std::map<std::string, std::vector<Vec>> cartans;
  Vec e(1);
  e << 1.0;
  cartans["t"] = {e};
  GroupConstraint c{"signature", Mat::Identity(2, 2)};
  return std::make_shared<LieAlgebraSpec>("so2", 2, std::vector<Mat>{J}, 1, std::move(cartans),
                                          c);
}

SpecPtr make_borel_sl2() {
  Mat H = (Mat(2, 2) << 1, 0, 0, -1).finished();
  Mat E = (Mat(2, 2) << 0, 1, 0, 0).finished();
  std::map<std::string, std::vector<Vec>> cartans;
  Vec a(2);
  a << 1.0, 0.0;
  cartans["a"] = {a};
  GroupConstraint c{"symplectic", (Mat(2, 2) << 0, 1, -1, 0).finished()};
  return std::make_shared<LieAlgebraSpec>("b_sl2", 2, std::vector<Mat>{H, E}, 1,
                                          std::move(cartans), c);
}

SpecPtr make_nilpotent_sl2() {
  Mat E = (Mat(2, 2) << 0, 1, 0, 0).finished();
  GroupConstraint c{"symplectic", (Mat(2, 2) << 0, 1, -1, 0).finished()};
  return std::make_shared<LieAlgebraSpec>("n_sl2", 2, std::vector<Mat>{E}, 0, std::map<std::string, std::vector<Vec>>{}, c);
}

SpecPtr make_sp(int n) {
  if (n < 1) throw AlgebraError("sp needs n >= 1");
  const int N = 2 * n;
  std::vector<Mat> basis;
  // A block: [E_ij, 0; 0, -E_ji]
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat m = Mat::Zero(N, N);
      m(i, j) = 1.0;
      m(n + j, n + i) = -1.0;
      basis.push_back(m);
    }
  // B block: symmetric upper right
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat m = Mat::Zero(N, N);
      m(i, n + j) = 1.0;
      m(j, n + i) = 1.0;
      basis.push_back(m);
    }
  // C block: symmetric lower left
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat m = Mat::Zero(N, N);
      m(n + i, j) = 1.0;
      m(n + j, i) = 1.0;
      basis.push_back(m);
    }
  Mat form = Mat::Zero(N, N);
  form.block(0, n, n, n) = Mat::Identity(n, n);
  form.block(n, 0, n, n) = -Mat::Identity(n, n);

  auto spec = std::make_shared<LieAlgebraSpec>(
      "sp" + std::to_string(N), N, basis, n,
      std::map<std::string, std::vector<Vec>>{},
      GroupConstraint{"symplectic", form});

  // Cartan reps, expressed in the basis just built.
  std::map<std::string, std::vector<Vec>> cartans;
  std::vector<Vec> t_gens, a_gens;
  for (int k = 0; k < n; ++k) {
    Mat rot = Mat::Zero(N, N);
    rot(k, n + k) = 1.0;
    rot(n + k, k) = -1.0;
    t_gens.push_back(spec->to_coords(rot));
    Mat dia = Mat::Zero(N, N);
    dia(k, k) = 1.0;
    dia(n + k, n + k) = -1.0;
    a_gens.push_back(spec->to_coords(dia));
  }
  cartans["t"] = t_gens;
  cartans["a"] = a_gens;
  return std::make_shared<LieAlgebraSpec>(
      "sp" + std::to_string(N), N, std::move(basis), n, std::move(cartans),
      GroupConstraint{"symplectic", form});
}

SpecPtr make_so_pq(int p, int q) {
  const int N = p + q;
  std::vector<Mat> basis;
  // A block skew (p x p), D block skew (q x q), B block free (p x q)
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      Mat m = Mat::Zero(N, N);
      m(i, j) = 1.0;
      m(j, i) = -1.0;
      basis.push_back(m);
    }
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      Mat m = Mat::Zero(N, N);
      m(p + i, p + j) = 1.0;
      m(p + j, p + i) = -1.0;
      basis.push_back(m);
    }
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) {
      Mat m = Mat::Zero(N, N);
      m(i, p + j) = 1.0;
      m(p + j, i) = 1.0;
      basis.push_back(m);
    }
  Mat form = Mat::Identity(N, N);
  form.block(p, p, q, q) = -Mat::Identity(q, q);
  int rank = std::min(p, q) + (std::max(p, q) - std::min(p, q)) / 2;

  auto tmp = std::make_shared<LieAlgebraSpec>(
      "so" + std::to_string(p) + std::to_string(q), N, basis, rank,
      std::map<std::string, std::vector<Vec>>{},
      GroupConstraint{"signature", form});

  std::map<std::string, std::vector<Vec>> cartans;
  if (p / 2 + q / 2 == rank) {
    // Compact Cartan: rotations in definite coordinate pairs.
    std::vector<Vec> t_gens;
    for (int k = 0; k + 1 < p; k += 2) {
      Mat rot = Mat::Zero(N, N);
      rot(k, k + 1) = 1.0;
      rot(k + 1, k) = -1.0;
      t_gens.push_back(tmp->to_coords(rot));
    }
    for (int k = 0; k + 1 < q; k += 2) {
      Mat rot = Mat::Zero(N, N);
      rot(p + k, p + k + 1) = 1.0;
      rot(p + k + 1, p + k) = -1.0;
      t_gens.push_back(tmp->to_coords(rot));
    }
    cartans["t"] = t_gens;
  }
  return std::make_shared<LieAlgebraSpec>(
      "so" + std::to_string(p) + std::to_string(q), N, std::move(basis), rank,
      std::move(cartans), GroupConstraint{"signature", form});
}

SpecPtr builtin_spec(const std::string& name) {
  if (name == "sl2") return make_sl2();
  if (name == "sl2x2") return make_sl2_product(2);
  if (name == "sl2x3") return make_sl2_product(3);
  if (name == "su2") return make_su2();
  if (name == "so2") return make_so2();
  if (name == "b_sl2") return make_borel_sl2();
  if (name == "n_sl2") return make_nilpotent_sl2();
  if (name == "sp2") return make_sp(1);
  if (name == "sp4") return make_sp(2);
  if (name == "sp6") return make_sp(3);
  if (name == "sp8") return make_sp(4);
  if (name == "so23") return make_so_pq(2, 3);
  if (name == "so43") return make_so_pq(4, 3);
  throw AlgebraError("unknown builtin spec '" + name + "'");
}

std::vector<Vec> sl2_n_subalgebra() {
  // E = [0 1; 0 0] has coordinates (0, 1/2, -1/2).
  return {coords3(0, 0.5, -0.5)};
}

std::vector<Vec> sl2_b_subalgebra() {
  return {coords3(1, 0, 0), coords3(0, 0.5, -0.5)};
}

std::vector<Vec> full_subalgebra(const SpecPtr& spec) {
  std::vector<Vec> out;
  for (int i = 0; i < spec->dim(); ++i) {
    Vec v = Vec::Zero(spec->dim());
    v[i] = 1.0;
    out.push_back(v);
  }
  return out;
}

std::vector<Vec> product_diagonal_subalgebra(const SpecPtr& product, int k) {
  int fdim = product->dim() / k;
  std::vector<Vec> out;
  for (int i = 0; i < fdim; ++i) {
    Vec v = Vec::Zero(product->dim());
    for (int block = 0; block < k; ++block) v[block * fdim + i] = 1.0;
    out.push_back(v);
  }
  return out;
}

namespace {

// Positions (index pairs) a 2m x 2m symplectic block occupies inside sp(2n).
bool in_sp_block(int n, int m, int a, int b) {
  auto in_set = [&](int i) { return (i < m) || (i >= n && i < n + m); };
  return in_set(a) && in_set(b);
}

}  // namespace

std::vector<Vec> sp_block_subalgebra(int n, int m) {
  if (m < 0 || m > n) throw AlgebraError("invalid sp block parameters");
  SpecPtr big = make_sp(n);
  std::vector<Vec> out;
  if (m == 0) return out;
  const int N = 2 * n;
  for (int bidx = 0; bidx < big->dim(); ++bidx) {
    const Mat& bm = big->basis()[bidx];
    bool inside = true, touches = false;
    for (int a = 0; a < N && inside; ++a)
      for (int b = 0; b < N; ++b)
        if (bm(a, b) != 0.0) {
          touches = true;
          if (!in_sp_block(n, m, a, b)) {
            inside = false;
            break;
          }
        }
    if (touches && inside) {
      Vec v = Vec::Zero(big->dim());
      v[bidx] = 1.0;
      out.push_back(v);
    }
  }
  return out;
}

std::vector<Vec> sp_block_complement(int n, int m) {
  SpecPtr big = make_sp(n);
  std::vector<Vec> out;
  const int N = 2 * n;
  for (int bidx = 0; bidx < big->dim(); ++bidx) {
    const Mat& bm = big->basis()[bidx];
    bool off_block = true;
    for (int a = 0; a < N && off_block; ++a)
      for (int b = 0; b < N; ++b)
        if (bm(a, b) != 0.0 && in_sp_block(n, m, a, b)) {
          off_block = false;
          break;
        }
    if (off_block) {
      Vec v = Vec::Zero(big->dim());
      v[bidx] = 1.0;
      out.push_back(v);
    }
  }
  return out;
}

std::vector<Vec> u_rs_in_so_pq(int p, int q, int r, int s) {
  if (2 * r > p || 2 * s > q)
    throw AlgebraError("u(r,s) does not fit in so(p,q)");
  SpecPtr big = make_so_pq(p, q);
  const int N = p + q;
  const int c = r + s;  // complex dimension
  // Complex coordinate l < r lives on the positive real coordinates
  // (2l, 2l+1); coordinate l >= r on the negative pair (p+2(l-r), p+2(l-r)+1).
  auto offset = [&](int l) { return (l < r) ? 2 * l : p + 2 * (l - r); };
  std::vector<Vec> out;
  // Basis of u(r,s): M = [[i a, b], [conj(b), i d]] w.r.t. the hermitian form
  // diag(I_r, -I_s): diagonal imaginary units plus complex off-diagonal pairs.
  std::vector<CMat> cbasis;
  for (int l = 0; l < c; ++l) {
    CMat m = CMat::Zero(c, c);
    m(l, l) = Complex(0, 1);
    cbasis.push_back(m);
  }
  for (int a = 0; a < c; ++a)
    for (int b = a + 1; b < c; ++b) {
      double sgn_a = a < r ? 1.0 : -1.0;
      double sgn_b = b < r ? 1.0 : -1.0;
      // M^H h + h M = 0 with h = diag(sgn): m(b,a) = -sgn_a sgn_b conj(m(a,b))
      CMat m1 = CMat::Zero(c, c);
      m1(a, b) = Complex(1, 0);
      m1(b, a) = Complex(-sgn_a * sgn_b, 0);
      cbasis.push_back(m1);
      CMat m2 = CMat::Zero(c, c);
      m2(a, b) = Complex(0, 1);
      m2(b, a) = Complex(0, sgn_a * sgn_b);
      cbasis.push_back(m2);
    }
  for (const CMat& cm : cbasis) {
    Mat m = Mat::Zero(N, N);
    for (int a = 0; a < c; ++a)
      for (int b = 0; b < c; ++b) {
        Complex z = cm(a, b);
        if (z == Complex(0, 0)) continue;
        m.block(offset(a), offset(b), 2, 2) = complex_block(z.real(), z.imag());
      }
    double res = 0;
    Vec v = big->to_coords(m, &res);
    if (res > 1e-10)
      throw AlgebraError("u(r,s) realification left so(p,q)");
    out.push_back(v);
  }
  return out;
}

std::vector<Vec> su2_t_subalgebra() {
  Vec v = Vec::Zero(3);
  v[0] = 1.0;
  return {v};
}

std::vector<Vec> builtin_subalgebra(const SpecPtr& spec,
                                    const std::string& name) {
  const std::string& s = spec->name();
  if (name == "full") return full_subalgebra(spec);
  if (s == "sl2") {
    if (name == "n") return sl2_n_subalgebra();
    if (name == "b") return sl2_b_subalgebra();
  }
  if (s.rfind("sl2x", 0) == 0 && name == "diag")
    return product_diagonal_subalgebra(spec, std::stoi(s.substr(4)));
  if (s == "su2" && name == "t") return su2_t_subalgebra();
  if (s.rfind("sp", 0) == 0 && name.rfind("sp", 0) == 0) {
    int n = std::stoi(s.substr(2)) / 2;
    int m = std::stoi(name.substr(2)) / 2;
    return sp_block_subalgebra(n, m);
  }
  if (s.rfind("so", 0) == 0 && s.size() == 4 && name == "u11")
    return u_rs_in_so_pq(s[2] - '0', s[3] - '0', 1, 1);
  throw AlgebraError("unknown subalgebra '" + name + "' for spec '" + s + "'");
}

}  // namespace orbitcone
