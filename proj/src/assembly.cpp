#include "willmore/assembly.hpp"

#include <algorithm>
#include <exception>
#include <limits>

namespace willmore {

namespace {

constexpr int kMatrices = 9;  // M, A, F1, F2 x 6
constexpr int kVectors = 7;   // f2 x 3, g1, g2 x 3

constexpr std::array<std::pair<int, int>, 6> kF2Pairs = {{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

struct LocalBlocks {
  // mats[m][a * nloc + b], vecs[v][a]
  std::array<std::vector<double>, kMatrices> mats;
  std::array<std::vector<double>, kVectors> vecs;

  void reset(int nloc, bool full) {
    const int nm = full ? kMatrices : 2;
    for (int m = 0; m < nm; ++m) mats[m].assign(static_cast<std::size_t>(nloc) * nloc, 0.0);
    if (full) {
      for (auto& v : vecs) v.assign(nloc, 0.0);
    }
  }
};

// Element integrals of all blocks. Without u only M and A are computed.
void element_blocks(const SurfaceMesh& mesh, const VectorX& x, const VectorX* u, bool include_Q, int e,
                    ElementGeometry& geom, LocalBlocks& out) {
  const ReferenceElement& ref = mesh.reference();
  const int nloc = ref.node_count();
  const int N = mesh.node_count();
  compute_element_geometry(mesh, x, e, geom);
  const bool full = u != nullptr;
  out.reset(nloc, full);

  double H[32];
  Vec3 nu[32];
  if (full) {
    const auto el = mesh.element(e);
    for (int a = 0; a < nloc; ++a) {
      H[a] = (*u)[el[a]];
      nu[a] = Vec3((*u)[N + el[a]], (*u)[2 * N + el[a]], (*u)[3 * N + el[a]]);
    }
  }

  for (int q = 0; q < ref.quad_size(); ++q) {
    const double w = geom.weight[q];
    double* Mq = out.mats[0].data();
    double* Aq = out.mats[1].data();
    for (int a = 0; a < nloc; ++a) {
      const double pa = ref.value(q, a);
      const Vec3& ga = geom.grad(q, a);
      for (int b = 0; b < nloc; ++b) {
        Mq[a * nloc + b] += w * pa * ref.value(q, b);
        Aq[a * nloc + b] += w * ga.dot(geom.grad(q, b));
      }
    }
    if (!full) continue;

    const PointFields pf = point_fields(ref, geom, q, H, nu, include_Q);
    const Mat3 A2 = pf.A * pf.A;
    const Mat3 C = pf.H * pf.A - A2;
    const Vec3 lin = pf.grad_H.squaredNorm() * pf.nu + A2 * pf.grad_H;
    const Vec3 AgH = pf.A * pf.grad_H;
    for (int a = 0; a < nloc; ++a) {
      const double pa = ref.value(q, a);
      const Vec3& ga = geom.grad(q, a);
      for (int b = 0; b < nloc; ++b) {
        const double mass = w * pa * ref.value(q, b);
        out.mats[2][a * nloc + b] -= pf.absA2 * mass;
        for (int p = 0; p < 6; ++p) {
          out.mats[3 + p][a * nloc + b] += C(kF2Pairs[p].first, kF2Pairs[p].second) * mass;
        }
      }
      const double div_coupling = 2.0 * AgH.dot(ga);
      for (int l = 0; l < 3; ++l) {
        out.vecs[l][a] += w * (lin[l] * pa + div_coupling * pf.nu[l] + pf.Q * ga[l] - pf.Q * pf.H * pf.nu[l] * pa);
        out.vecs[4 + l][a] += w * pf.absA2 * pf.nu[l] * pa;
      }
      out.vecs[3][a] += w * pf.Q * pa;
    }
  }
}

struct GlobalArrays {
  std::array<std::vector<double>*, kMatrices> mats{};
  std::array<double*, kVectors> vecs{};
};

GlobalArrays bind(SystemBlocks& sb, int N, bool full) {
  GlobalArrays g;
  g.mats[0] = &sb.M;
  g.mats[1] = &sb.A;
  if (full) {
    g.mats[2] = &sb.F1;
    for (int p = 0; p < 6; ++p) g.mats[3 + p] = &sb.F2[p];
    for (int l = 0; l < 3; ++l) {
      g.vecs[l] = sb.f2.data() + l * N;
      g.vecs[4 + l] = sb.g2.data() + l * N;
    }
    g.vecs[3] = sb.g1.data();
  }
  return g;
}

}  // namespace

PointFields point_fields(const ReferenceElement& ref, const ElementGeometry& geom, int q,
                         const double* H, const Vec3* nu, bool include_Q) {
  PointFields pf;
  Mat3 G = Mat3::Zero();  // G(i, j) = D_i nu_j
  for (int a = 0; a < ref.node_count(); ++a) {
    const double pa = ref.value(q, a);
    const Vec3& ga = geom.grad(q, a);
    pf.H += H[a] * pa;
    pf.grad_H += H[a] * ga;
    pf.nu += nu[a] * pa;
    G += ga * nu[a].transpose();
  }
  pf.A = 0.5 * (G + G.transpose());
  pf.absA2 = pf.A.squaredNorm();
  pf.Q = include_Q ? -0.5 * pf.H * pf.H * pf.H + pf.absA2 * pf.H : 0.0;
  return pf;
}

Assembler::Assembler(const SurfaceMesh& mesh)
    : mesh_(mesh), pattern_(std::make_shared<const MeshPattern>(mesh)) {}

SystemBlocks Assembler::geometry(const VectorX& x, const AssemblyOptions& options) const {
  return run(x, nullptr, options);
}

SystemBlocks Assembler::system(const VectorX& x, const VectorX& u, const AssemblyOptions& options) const {
  if (u.size() != 4 * mesh_.node_count()) throw Error("assembly: u must have length 4N");
  return run(x, &u, options);
}

SystemBlocks Assembler::run(const VectorX& x, const VectorX* u, const AssemblyOptions& options) const {
  const int N = mesh_.node_count();
  if (x.size() != 3 * N) throw Error("assembly: x must have length 3N");
  const int E = mesh_.element_count();
  const int nloc = mesh_.nodes_per_element();
  const int nnz = pattern_->nonzeros();
  const bool full = u != nullptr;
  const int n_mats = full ? kMatrices : 2;
  const int n_vecs = full ? kVectors : 0;

  SystemBlocks sb;
  sb.pattern = pattern_;
  sb.M.assign(nnz, 0.0);
  sb.A.assign(nnz, 0.0);
  if (full) {
    sb.F1.assign(nnz, 0.0);
    for (auto& F : sb.F2) F.assign(nnz, 0.0);
    sb.f2 = VectorX::Zero(3 * N);
    sb.g1 = VectorX::Zero(N);
    sb.g2 = VectorX::Zero(3 * N);
  }
  GlobalArrays global = bind(sb, N, full);
  const auto& slots = pattern_->element_slots();
  const auto& conn = mesh_.connectivity();
  const std::size_t nloc2 = static_cast<std::size_t>(nloc) * nloc;

#ifdef WILLMORE_HAVE_OPENMP
  const bool parallel = options.policy == ExecutionPolicy::Parallel;
#else
  const bool parallel = false;
#endif

  if (!parallel) {
    ElementGeometry geom;
    LocalBlocks local;
    for (int e = 0; e < E; ++e) {
      element_blocks(mesh_, x, u, options.include_Q, e, geom, local);
      const int* es = slots.data() + e * nloc2;
      for (int m = 0; m < n_mats; ++m) {
        double* dst = global.mats[m]->data();
        for (std::size_t ab = 0; ab < nloc2; ++ab) dst[es[ab]] += local.mats[m][ab];
      }
      for (int v = 0; v < n_vecs; ++v) {
        for (int a = 0; a < nloc; ++a) global.vecs[v][conn[e * nloc + a]] += local.vecs[v][a];
      }
    }
    return sb;
  }

  // Parallel: element phase into per-element buffers, then an ordered gather.
  std::vector<std::vector<double>> mat_buf(n_mats, std::vector<double>(E * nloc2));
  std::vector<std::vector<double>> vec_buf(n_vecs, std::vector<double>(static_cast<std::size_t>(E) * nloc));
  int failed_element = std::numeric_limits<int>::max();
  std::exception_ptr failure;

#pragma omp parallel
  {
    ElementGeometry geom;
    LocalBlocks local;
#pragma omp for schedule(static)
    for (int e = 0; e < E; ++e) {
      try {
        element_blocks(mesh_, x, u, options.include_Q, e, geom, local);
      } catch (const DegenerateElementError&) {
#pragma omp critical(willmore_assembly_failure)
        if (e < failed_element) {
          failed_element = e;
          failure = std::current_exception();
        }
        continue;
      }
      for (int m = 0; m < n_mats; ++m) std::copy(local.mats[m].begin(), local.mats[m].end(), mat_buf[m].begin() + e * nloc2);
      for (int v = 0; v < n_vecs; ++v) std::copy(local.vecs[v].begin(), local.vecs[v].end(), vec_buf[v].begin() + e * nloc);
    }
  }
  // report the lowest failing element, as the serial loop would
  if (failure) std::rethrow_exception(failure);

  const auto& sptr = pattern_->slot_source_ptr();
  const auto& ssrc = pattern_->slot_sources();
#pragma omp parallel for schedule(static)
  for (int s = 0; s < nnz; ++s) {
    for (int m = 0; m < n_mats; ++m) {
      double acc = 0.0;
      for (int i = sptr[s]; i < sptr[s + 1]; ++i) acc += mat_buf[m][ssrc[i]];
      (*global.mats[m])[s] = acc;
    }
  }
  if (full) {
    const auto& nptr = pattern_->node_source_ptr();
    const auto& nsrc = pattern_->node_sources();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < N; ++j) {
      for (int v = 0; v < n_vecs; ++v) {
        double acc = 0.0;
        for (int i = nptr[j]; i < nptr[j + 1]; ++i) acc += vec_buf[v][nsrc[i]];
        global.vecs[v][j] = acc;
      }
    }
  }
  return sb;
}

SparseMatrix SystemBlocks::F2_matrix() const {
  const int N = pattern->size();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * static_cast<std::size_t>(pattern->nonzeros()));
  const auto& cp = pattern->col_ptr();
  const auto& ri = pattern->row_index();
  for (int l = 0; l < 3; ++l) {
    for (int m = 0; m < 3; ++m) {
      const auto& vals = F2[f2_block(l, m)];
      for (int j = 0; j < N; ++j) {
        for (int k = cp[j]; k < cp[j + 1]; ++k) trips.emplace_back(l * N + ri[k], m * N + j, vals[k]);
      }
    }
  }
  SparseMatrix F(3 * N, 3 * N);
  F.setFromTriplets(trips.begin(), trips.end());
  return F;
}

VectorX SystemBlocks::f() const {
  const int N = pattern->size();
  VectorX out = VectorX::Zero(4 * N);
  out.segment(N, 3 * N) = f2;
  return out;
}

VectorX SystemBlocks::g() const {
  const int N = pattern->size();
  VectorX out(4 * N);
  out.segment(0, N) = g1;
  out.segment(N, 3 * N) = g2;
  return out;
}

SparseMatrix assemble_mass(const SurfaceMesh& mesh, const VectorX& x) {
  return Assembler(mesh).geometry(x).mass();
}

SparseMatrix assemble_stiffness(const SurfaceMesh& mesh, const VectorX& x) {
  return Assembler(mesh).geometry(x).stiffness();
}

std::pair<SparseMatrix, SparseMatrix> assemble_F(const SurfaceMesh& mesh, const VectorX& x, const VectorX& u) {
  const SystemBlocks sb = Assembler(mesh).system(x, u);
  return {sb.F1_matrix(), sb.F2_matrix()};
}

VectorX assemble_f2(const SurfaceMesh& mesh, const VectorX& x, const VectorX& u, bool include_Q) {
  return Assembler(mesh).system(x, u, {ExecutionPolicy::Serial, include_Q}).f2;
}

std::pair<VectorX, VectorX> assemble_g(const SurfaceMesh& mesh, const VectorX& x, const VectorX& u,
                                       bool include_Q) {
  SystemBlocks sb = Assembler(mesh).system(x, u, {ExecutionPolicy::Serial, include_Q});
  return {std::move(sb.g1), std::move(sb.g2)};
}

VectorX apply_block(const SparseMatrix& S, const VectorX& v) {
  const Eigen::Index n = S.cols();
  if (n == 0 || v.size() % n != 0) throw Error("apply_block: vector length is not a multiple of N");
  VectorX out(v.size());
  for (Eigen::Index c = 0; c < v.size() / n; ++c) out.segment(c * n, n) = S * v.segment(c * n, n);
  return out;
}

double willmore_energy(const SparseMatrix& M, const VectorX& H) { return 0.5 * H.dot(M * H); }

double surface_area(const SparseMatrix& M) { return M.sum(); }

}  // namespace willmore
