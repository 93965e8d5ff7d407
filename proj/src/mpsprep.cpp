#include "vbs/mpsprep.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vbs/builders.hpp"

namespace vbs {

Mat MpsTensor::as_matrix() const {
    Mat m(Eigen::Index(left_dim) * 4, right_dim);
    for (int al = 0; al < left_dim; ++al)
        for (int s = 0; s < 4; ++s) m.row(al * 4 + s) = a[s].row(al);
    return m;
}

MpsTensor MpsTensor::from_matrix(const Mat& m, int left_dim) {
    if (m.rows() != Eigen::Index(left_dim) * 4) throw std::invalid_argument("MpsTensor::from_matrix: row count");
    MpsTensor t;
    t.left_dim = left_dim;
    t.right_dim = int(m.cols());
    for (int s = 0; s < 4; ++s) {
        t.a[s] = Mat(left_dim, m.cols());
        for (int al = 0; al < left_dim; ++al) t.a[s].row(al) = m.row(al * 4 + s);
    }
    return t;
}

bool MpsTensor::left_normalized(double tol) const {
    const Mat m = as_matrix();
    const Mat g = m.adjoint() * m;
    return (g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <= tol;
}

MpsTensor vbs_bulk_tensor() {
    const double big = std::sqrt(2.0 / 3.0), small = 1.0 / std::sqrt(6.0);
    MpsTensor t;
    t.left_dim = t.right_dim = 2;
    for (auto& m : t.a) m = Mat::Zero(2, 2);
    t.a[0](0, 1) = big;  // up up
    t.a[1](0, 0) = -small;
    t.a[1](1, 1) = small;
    t.a[2] = t.a[1];
    t.a[3](1, 0) = -big;  // down down
    return t;
}

std::vector<MpsTensor> left_canonicalize(std::vector<MpsTensor> chain, double* max_discarded) {
    double worst = 0.0;
    Mat carry;  // S V^dag carried into the next site
    for (std::size_t i = 0; i < chain.size(); ++i) {
        MpsTensor t = chain[i];
        if (i > 0) {
            for (auto& m : t.a) m = carry * m;
            t.left_dim = int(carry.rows());
        }
        const Mat m = t.as_matrix();
        Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        int keep = 0;
        for (Eigen::Index k = 0; k < s.size(); ++k) {
            if (s(k) > 1e-12) ++keep;
            else worst = std::max(worst, s(k));
        }
        if (keep == 0) throw std::invalid_argument("left_canonicalize: zero tensor");
        const Mat u = svd.matrixU().leftCols(keep);
        carry = s.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
        chain[i] = MpsTensor::from_matrix(u, t.left_dim);
    }
    // the last carry is a 1x1 norm (times a phase) and is dropped
    if (max_discarded) *max_discarded = worst;
    return chain;
}

std::vector<MpsTensor> vbs_mps(int n, Boundary boundary, int left_state, int right_state) {
    if (n < 2) throw std::invalid_argument("vbs_mps: need at least 2 sites");
    const MpsTensor bulk = vbs_bulk_tensor();
    if (boundary == Boundary::ring) {
        if (n < 3) throw std::invalid_argument("vbs_mps: a ring needs at least 3 sites");
        return std::vector<MpsTensor>(std::size_t(n), bulk);
    }
    if (boundary != Boundary::open_chain) throw std::invalid_argument("vbs_mps: boundary must be open_chain or ring");
    if ((left_state != 0 && left_state != 1) || (right_state != 0 && right_state != 1))
        throw std::invalid_argument("vbs_mps: boundary spins must be 0 (up) or 1 (down)");
    // l = e_left; r = eps^T e_right with eps = [[0,1],[-1,0]]
    Mat l = Mat::Zero(1, 2);
    l(0, left_state) = 1.0;
    Mat r = Mat::Zero(2, 1);
    r(1 - right_state, 0) = right_state == 0 ? 1.0 : -1.0;
    std::vector<MpsTensor> chain(std::size_t(n), bulk);
    for (auto& m : chain.front().a) m = l * m;
    chain.front().left_dim = 1;
    for (auto& m : chain.back().a) m = m * r;
    chain.back().right_dim = 1;
    return left_canonicalize(std::move(chain));
}

Vec contract_mps(const std::vector<MpsTensor>& chain, bool periodic) {
    const int n = int(chain.size());
    if (n < 1 || 2 * n > max_qubits()) throw std::invalid_argument("contract_mps: bad chain length");
    if (!periodic && (chain.front().left_dim != 1 || chain.back().right_dim != 1))
        throw std::invalid_argument("contract_mps: open chain needs unit end dimensions");
    const Eigen::Index dim = Eigen::Index(1) << (2 * n);
    Vec out(dim);
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        Mat m;
        for (int i = 0; i < n; ++i) {
            const int s = int((idx >> (2 * (n - 1 - i))) & 3);
            m = i == 0 ? chain[0].a[s] : Mat(m * chain[i].a[s]);
        }
        out(idx) = periodic ? m.trace() : m(0, 0);
    }
    return out;
}

Disentangler build_disentangler(const MpsTensor& t, DisentanglerRole role, const std::vector<int>& seed_order) {
    Disentangler d;
    d.role = role;
    switch (role) {
        case DisentanglerRole::first_open:
        case DisentanglerRole::bulk: {
            const int want_left = role == DisentanglerRole::first_open ? 1 : 2;
            if (t.left_dim != want_left || t.right_dim != 2)
                throw std::invalid_argument("build_disentangler: tensor shape does not fit the role");
            if (!t.left_normalized(1e-10))
                throw std::invalid_argument("build_disentangler: tensor is not left-normalized");
            // an 8-entry seed also serves the 4x4 first site: keep the entries that fit
            std::vector<int> seed;
            const int dim = 4 * want_left;
            for (int i : seed_order)
                if (int(seed_order.size()) == dim || i < dim) seed.push_back(i);
            d.matrix = complete_unitary(t.as_matrix(), {0, 1}, seed);
            return d;
        }
        case DisentanglerRole::last_open: {
            if (t.left_dim != 2 || t.right_dim != 1) throw std::invalid_argument("build_disentangler: last site shape");
            Vec v = t.as_matrix().col(0);
            if (std::abs(v.norm() - 1.0) > 1e-10) throw std::invalid_argument("build_disentangler: last site not normalized");
            d.matrix = v;
            return d;
        }
        case DisentanglerRole::last_periodic_state:
            d.matrix = periodic_last_site_state(t);
            return d;
        case DisentanglerRole::first_periodic_embedded: {
            const Mat at = periodic_first_site_matrix(t);
            return embed_nonunitary_periodic(at, default_embedding_scale(at), seed_order);
        }
    }
    throw std::invalid_argument("build_disentangler: unknown role");
}

Mat periodic_first_site_matrix(const MpsTensor& t) {
    if (t.left_dim != 2 || t.right_dim != 2) throw std::invalid_argument("periodic_first_site_matrix: need 2x2 tensor");
    Mat m(4, 4);
    for (int s = 0; s < 4; ++s)
        for (int dl = 0; dl < 2; ++dl)
            for (int al = 0; al < 2; ++al) m(s, dl * 2 + al) = t.a[s](dl, al);
    return m;
}

Vec periodic_last_site_state(const MpsTensor& t) {
    if (t.left_dim != 2 || t.right_dim != 2) throw std::invalid_argument("periodic_last_site_state: need 2x2 tensor");
    Vec v(16);
    for (int g = 0; g < 2; ++g)
        for (int s = 0; s < 4; ++s)
            for (int dl = 0; dl < 2; ++dl) v(g * 8 + s * 2 + dl) = t.a[s](g, dl);
    return v / v.norm();
}

double embedding_scale_bound(const Mat& a_tilde) {
    Eigen::JacobiSVD<Mat> svd(a_tilde);
    return 1.0 / svd.singularValues()(0);
}

double default_embedding_scale(const Mat& a_tilde) {
    Eigen::JacobiSVD<Mat> svd(a_tilde);
    return 0.5 / std::sqrt(svd.singularValues()(0));
}

Disentangler embed_nonunitary_periodic(const Mat& a_tilde, double n, const std::vector<int>& seed_order) {
    if (a_tilde.rows() != 4 || a_tilde.cols() != 4) throw std::invalid_argument("embed_nonunitary_periodic: need 4x4");
    const double bound = embedding_scale_bound(a_tilde);
    if (!(n > 0.0 && n < bound))
        throw std::invalid_argument("embed_nonunitary_periodic: scale " + std::to_string(n) +
                                    " outside (0, " + std::to_string(bound) + ")");
    Eigen::JacobiSVD<Mat> svd(a_tilde, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    Eigen::VectorXd root(4);
    for (int i = 0; i < 4; ++i) root(i) = std::sqrt(std::max(0.0, 1.0 - n * n * s(i) * s(i)));
    const Mat c = svd.matrixU() * root.asDiagonal() * svd.matrixV().adjoint();
    Mat cols(8, 4);
    cols.topRows(4) = n * a_tilde;
    cols.bottomRows(4) = c;
    Disentangler d;
    d.role = DisentanglerRole::first_periodic_embedded;
    d.scale = n;
    d.matrix = complete_unitary(cols, {0, 1, 2, 3}, seed_order);
    return d;
}

Mat printed_bulk_disentangler(bool corrected) {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    const double a = 2.0 * r2 / (corrected ? 5.0 : 3.0) + r3 / 30.0;
    const double rad = 5.0 / 12.0 - a * a;
    const double b = rad >= 0 ? -std::sqrt(rad) : std::numeric_limits<double>::quiet_NaN();
    const double i12 = 1.0 / std::sqrt(12.0);
    const double f = (a - 0.5 * b) / (i12 + 0.5 * b);
    const double c = -1.0 / std::sqrt(1.0 + f * f + 0.25 * (1.0 + f) * (1.0 + f));
    const double d = f * c, e = -(c + d) / 2.0;
    const double r23 = std::sqrt(2.0 / 3.0), i6 = 1.0 / std::sqrt(6.0), i3 = 1.0 / r3;
    const double rows[8][8] = {
        {0, r23, 0, 0, 0, 0, 0, -i3},      {-i6, 0, 0, a, a, c, 0, 0},
        {-i6, 0, 0, -i12, -i12, d, 0, 0},  {0, 0, 0, 0, 0, 0, 1, 0},
        {0, 0, 1, 0, 0, 0, 0, 0},          {0, i6, 0, 0.5, -0.5, 0, 0, i3},
        {0, i6, 0, -0.5, 0.5, 0, 0, i3},   {-r23, 0, 0, b, b, e, 0, 0},
    };
    Mat m(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) m(i, j) = rows[i][j];
    return m;
}

namespace {

void add_block(Circuit& c, const std::string& label, const Mat& u, const std::vector<int>& qubits) {
    Opaque op;
    op.label = label;
    op.qubits = qubits;
    op.matrix = u;
    op.costs = declared_generic_unitary_cost(int(qubits.size()));
    c.opaque(std::move(op));
}

}  // namespace

Circuit mps_preparation_circuit(int n, Boundary boundary, int left_state, int right_state, const MpsOptions& opts) {
    const auto chain = vbs_mps(n, boundary, left_state, right_state);
    const bool ring = boundary == Boundary::ring;
    const auto sl = [](int i) { return 2 * i; };
    const auto sr = [](int i) { return 2 * i + 1; };
    Circuit c(2 * n + (ring ? 1 : 0));

    if (ring) {
        const MpsTensor& t = chain[0];
        c.append(schmidt_prepare(periodic_last_site_state(t), {sr(n - 2), sl(n - 1), sr(n - 1), sl(0)}, c.n_qubits));
        const Mat bulk = opts.bulk_override ? *opts.bulk_override
                                            : build_disentangler(t, DisentanglerRole::bulk, opts.completion_seed).matrix;
        for (int i = n - 2; i >= 1; --i) add_block(c, "mps_bulk", bulk, {sr(i - 1), sl(i), sr(i)});
        const Mat at = periodic_first_site_matrix(t);
        const double scale = opts.scale ? *opts.scale : default_embedding_scale(at);
        const auto emb = embed_nonunitary_periodic(at, scale, opts.completion_seed);
        const int anc = 2 * n;
        add_block(c, "mps_embed", emb.matrix, {anc, sl(0), sr(0)});
        c.measure(anc, 0);
        c.metadata["scale"] = std::to_string(scale);
    } else {
        const Vec last = build_disentangler(chain[n - 1], DisentanglerRole::last_open).matrix.col(0);
        c.append(schmidt_prepare(last, {sr(n - 2), sl(n - 1), sr(n - 1)}, c.n_qubits));
        for (int i = n - 2; i >= 1; --i)
            add_block(c, "mps_bulk", build_disentangler(chain[i], DisentanglerRole::bulk, opts.completion_seed).matrix,
                      {sr(i - 1), sl(i), sr(i)});
        add_block(c, "mps_first", build_disentangler(chain[0], DisentanglerRole::first_open, opts.completion_seed).matrix,
                  {sl(0), sr(0)});
    }
    c.metadata["method"] = "mps";
    c.metadata["declared_cnots"] = std::to_string(kMpsDeclaredCnotsPerSite * n);
    return c;
}

MpsPreparation prepare_via_mps(int n, Boundary boundary, int left_state, int right_state, const MpsOptions& opts) {
    if (n < 2 || n > 6) throw std::invalid_argument("prepare_via_mps: 2 <= N <= 6");
    MpsPreparation out;
    out.circuit = mps_preparation_circuit(n, boundary, left_state, right_state, opts);
    SimResult res;
    Statevector st = run_circuit(out.circuit, &res);
    out.success_prob = res.success_prob;
    std::vector<int> data(std::size_t(2 * n));
    for (int q = 0; q < 2 * n; ++q) data[q] = q;
    out.state = extract_subsystem(st, data);
    if (boundary == Boundary::ring)
        out.scale = opts.scale ? *opts.scale : default_embedding_scale(periodic_first_site_matrix(vbs_bulk_tensor()));
    return out;
}

double mps_periodic_success(int n, double scale) {
    if (n < 3 || !(scale > 0.0)) throw std::invalid_argument("mps_periodic_success: need N >= 3 and scale > 0");
    return scale * scale * (1.0 + 3.0 * std::pow(-1.0 / 3.0, n)) / 2.0;
}

}  // namespace vbs
