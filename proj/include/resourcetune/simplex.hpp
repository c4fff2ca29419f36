#ifndef RESOURCETUNE_SIMPLEX_HPP
#define RESOURCETUNE_SIMPLEX_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rtune {

/// Outcome of one LP solve.
struct LpResult {
    enum class Status { optimal, infeasible };
    Status status = Status::optimal;
    double objective = 0.0;
    std::vector<double> x;  // structural variable values
    long long iterations = 0;
};

/// Dual simplex for covering LPs:
///
///     min c'x   s.t.   A x >= b,   x >= 0,
///
/// with A a 0/1 matrix given column-wise (row-index lists) and c >= 0. The
/// all-slack basis is dual feasible for this class, so no phase-1 is needed,
/// and since A and c stay fixed across solves the final basis of one solve
/// warm-starts the next (only b changes).
///
/// Numerics: dual steepest-edge row pricing, a two-pass ratio test that
/// prefers large pivots among near-ties, and a deterministic relative cost
/// perturbation on larger instances to break the heavy degeneracy of
/// covering problems (uniform weights produce mass ties). The basis inverse
/// is held explicitly; drift is detected against the true basis columns and
/// repaired by refactorization, which exploits the slack-heavy structure of
/// covering bases (only the structural block needs a dense inversion).
class DualSimplex {
public:
    DualSimplex(int rows, std::vector<std::vector<int>> column_rows, std::vector<double> costs)
        : m_(rows), cols_(std::move(column_rows)), true_cost_(std::move(costs)) {
        if (cols_.size() != true_cost_.size()) {
            throw std::invalid_argument("DualSimplex: column/cost size mismatch");
        }
        for (double v : true_cost_) {
            if (!(v >= 0.0)) throw std::invalid_argument("DualSimplex: costs must be >= 0");
        }
        for (const auto& col : cols_) {
            for (int r : col) {
                if (r < 0 || r >= m_) throw std::invalid_argument("DualSimplex: bad row index");
            }
        }
        n_ = int(cols_.size());
        cost_ = true_cost_;
        if (n_ + m_ > 64) {
            // Deterministic tiny relative perturbation; breaks cost ties.
            // The induced optimality gap is O(1e-8) relative, far inside the
            // 1e-6 contract. Small instances stay exact.
            std::uint64_t h = 0x9e3779b97f4a7c15ULL;
            for (int j = 0; j < n_; ++j) {
                h ^= (h << 13), h ^= (h >> 7), h ^= (h << 17);
                const double u = double(h >> 11) * 0x1.0p-53;  // [0,1)
                cost_[j] += cost_[j] * 1e-8 * (0.5 + u);
            }
        }
        reset_basis();
    }

    int rows() const { return m_; }
    int columns() const { return n_; }

    /// Solves for the given right-hand side, reusing the previous basis.
    LpResult solve(const std::vector<double>& b) {
        if (int(b.size()) != m_) throw std::invalid_argument("DualSimplex: rhs size mismatch");
        b_ = b;
        compute_xb();

        LpResult result;
        singular_recoveries_ = 0;
        int refactor_attempts = 0;
        const long long iteration_cap = 200LL * m_ + 20000;
        long long iterations = 0;
        int since_refactor = 0;

        while (true) {
            // Leaving row: steepest-edge-weighted most violated basic value.
            int r = -1;
            double best_score = 0.0;
            for (int i = 0; i < m_; ++i) {
                if (xb_[i] >= -kFeasTol) continue;
                const double score = xb_[i] * xb_[i] / std::max(beta_[i], 1e-10);
                if (score > best_score) {
                    best_score = score;
                    r = i;
                }
            }
            if (r < 0) {
                if (!verify_and_extract(result)) {
                    if (++refactor_attempts > 4) {
                        throw std::runtime_error("DualSimplex: verification failed repeatedly");
                    }
                    refactorize();
                    since_refactor = 0;
                    continue;
                }
                result.status = LpResult::Status::optimal;
                result.iterations = iterations;
                return result;
            }

            const int q = choose_entering(r);
            // Distrust tiny or missing pivots on stale numerics; rebuild the
            // inverse and retry the iteration before concluding anything.
            if ((q < 0 || -alpha_[q] < 1e-7) && since_refactor > 0) {
                refactorize();
                since_refactor = 0;
                continue;
            }
            if (q < 0) {
                result.status = LpResult::Status::infeasible;
                result.iterations = iterations;
                return result;
            }

            if (!pivot(r, q)) {
                refactorize();
                since_refactor = 0;
                continue;
            }
            ++iterations;
            ++since_refactor;
            if (iterations > iteration_cap) {
                throw std::runtime_error("DualSimplex: iteration limit exceeded");
            }
            // The inverse is explicit and rots with long pivot runs; check
            // it against the true basis columns often (cheap) and rebuild
            // the moment residuals appear.
            if (since_refactor % 64 == 0 || since_refactor >= 512) {
                if (since_refactor >= 512 || basis_drifted()) {
                    refactorize();
                    since_refactor = 0;
                }
            }
        }
    }

private:
    static constexpr double kFeasTol = 1e-9;
    static constexpr double kAlphaEps = 1e-9;
    static constexpr double kHarrisDelta = 1e-10;

    void reset_basis() {
        basis_.resize(m_);
        in_basis_.assign(std::size_t(n_) + m_, 0);
        d_.assign(std::size_t(n_) + m_, 0.0);
        binv_.assign(std::size_t(m_) * m_, 0.0);
        beta_.assign(m_, 1.0);
        for (int i = 0; i < m_; ++i) {
            basis_[i] = n_ + i;
            in_basis_[n_ + i] = 1;
            binv_[std::size_t(i) * m_ + i] = -1.0;  // slack columns are -e_i
        }
        for (int j = 0; j < n_; ++j) d_[j] = cost_[j];

    }

    // rho . A_j for structural columns, -rho[i] for slack i.
    double coefficient(const double* rho, int j) const {
        if (j >= n_) return -rho[j - n_];
        double a = 0.0;
        for (int row : cols_[j]) a += rho[row];
        return a;
    }

    void compute_xb() {
        xb_.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const double* row = &binv_[std::size_t(i) * m_];
            double v = 0.0;
            for (int k = 0; k < m_; ++k) v += row[k] * b_[k];
            xb_[i] = v;
        }
    }

    // Harris-style two-pass ratio test over the pivot row of position r:
    // pass one bounds the dual step with a small slack, pass two takes the
    // largest-magnitude pivot among columns inside the bound.
    int choose_entering(int r) {
        const double* rho = &binv_[std::size_t(r) * m_];
        alpha_.assign(std::size_t(n_) + m_, 0.0);
        double theta_max = std::numeric_limits<double>::infinity();
        bool any = false;
        for (int j = 0; j < n_ + m_; ++j) {
            if (in_basis_[j]) continue;
            double a = coefficient(rho, j);
            if (std::fabs(a) < kAlphaEps) a = 0.0;
            alpha_[j] = a;
            if (a >= 0.0) continue;
            any = true;
            const double red = d_[j] < 0.0 ? 0.0 : d_[j];
            theta_max = std::min(theta_max, (red + kHarrisDelta) / (-a));
        }
        if (!any) return -1;
        int q = -1;
        double best_pivot = 0.0;
        for (int j = 0; j < n_ + m_; ++j) {
            if (in_basis_[j] || alpha_[j] >= 0.0) continue;
            const double red = d_[j] < 0.0 ? 0.0 : d_[j];
            if (red / (-alpha_[j]) <= theta_max && -alpha_[j] > best_pivot) {
                best_pivot = -alpha_[j];
                q = j;
            }
        }
        return q;
    }

    // Returns false when the pivot row and column disagree numerically; the
    // caller refactorizes and retries the iteration.
    bool pivot(int r, int q) {
        // w = Binv * A_q in basis coordinates.
        std::vector<double>& w = work_;
        w.assign(m_, 0.0);
        if (q >= n_) {
            const int sr = q - n_;
            for (int i = 0; i < m_; ++i) w[i] = -binv_[std::size_t(i) * m_ + sr];
        } else {
            for (int i = 0; i < m_; ++i) {
                const double* row = &binv_[std::size_t(i) * m_];
                double v = 0.0;
                for (int rowidx : cols_[q]) v += row[rowidx];
                w[i] = v;
            }
        }
        const double pivot_value = w[r];
        // The pivot row gave alpha_q for the same basis entry; a mismatch
        // means the inverse has drifted.
        if (std::fabs(pivot_value - alpha_[q]) > 1e-7 * (1.0 + std::fabs(alpha_[q]))) {
            return false;
        }
        if (std::fabs(pivot_value) < 1e-11) {
            throw std::runtime_error("DualSimplex: numerically singular pivot");
        }

        // Reduced costs move by theta along the pivot row. Slightly negative
        // d_q (ratio-test slack) is treated as zero so the dual objective
        // never regresses; the residue is an implicit tiny cost shift.
        const double theta = d_[q] > 0.0 ? d_[q] / alpha_[q] : 0.0;
        if (theta != 0.0) {
            for (int j = 0; j < n_ + m_; ++j) {
                if (in_basis_[j] || j == q) continue;
                if (alpha_[j] != 0.0) {
                    d_[j] -= theta * alpha_[j];
                    if (d_[j] < 0.0 && d_[j] > -1e-11) d_[j] = 0.0;
                }
            }
        }
        const int leaving = basis_[r];
        d_[leaving] = -theta;
        d_[q] = 0.0;

        // Eta update of the inverse; row weights follow the Devex-style
        // reference recurrence (exact norms are restored at refactorization).
        const double inv_pivot = 1.0 / pivot_value;
        const double beta_r = std::max(beta_[r], 1.0);
        double* row_r = &binv_[std::size_t(r) * m_];
        for (int k = 0; k < m_; ++k) row_r[k] *= inv_pivot;
        for (int i = 0; i < m_; ++i) {
            if (i == r || w[i] == 0.0) continue;
            double* row_i = &binv_[std::size_t(i) * m_];
            const double f = w[i] * inv_pivot;
            for (int k = 0; k < m_; ++k) row_i[k] -= f * row_r[k];
            beta_[i] = std::max(beta_[i], f * f * beta_r);
        }
        beta_[r] = std::max(beta_r * inv_pivot * inv_pivot, 1e-10);

        const double t = xb_[r] * inv_pivot;
        for (int i = 0; i < m_; ++i) {
            if (i != r && w[i] != 0.0) xb_[i] -= t * w[i];
        }
        xb_[r] = t;

        in_basis_[leaving] = 0;
        in_basis_[q] = 1;
        basis_[r] = q;
        return true;
    }

    // A numerically singular basis means a past pivot was accepted on bad
    // numbers. Restart from the all-slack basis, which is always valid; the
    // solve resumes from scratch. Capped so a corrupted instance cannot loop.
    void recover_from_singular_basis() {
        if (++singular_recoveries_ > 3) {
            throw std::runtime_error("DualSimplex: repeated singular bases");
        }
        reset_basis();
        compute_xb();
    }

    // Residual of the true basis columns against xb: B xb should equal b.
    bool basis_drifted() {
        std::vector<double>& resid = work_;
        resid.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const int j = basis_[i];
            if (j >= n_) {
                resid[j - n_] -= xb_[i];
            } else {
                for (int row : cols_[j]) resid[row] += xb_[i];
            }
        }
        for (int i = 0; i < m_; ++i) {
            if (std::fabs(resid[i] - b_[i]) > 1e-7) return true;
        }
        return false;
    }

    bool verify_and_extract(LpResult& result) {
        for (int i = 0; i < m_; ++i) {
            if (xb_[i] < -1e-7) return false;
        }
        if (basis_drifted()) return false;
        result.x.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_) result.x[basis_[i]] = std::max(0.0, xb_[i]);
        }
        std::vector<double> row_activity(m_, 0.0);
        for (int j = 0; j < n_; ++j) {
            if (result.x[j] == 0.0) continue;
            for (int row : cols_[j]) row_activity[row] += result.x[j];
        }
        for (int i = 0; i < m_; ++i) {
            if (row_activity[i] < b_[i] - 1e-7) return false;
        }
        result.objective = 0.0;
        for (int j = 0; j < n_; ++j) result.objective += true_cost_[j] * result.x[j];
        return true;
    }

    // Rebuilds the inverse from the current basis. Covering bases are
    // slack-heavy, and a basic slack contributes a -e_row column, so after
    // permuting slack-covered rows last the basis is block triangular:
    //
    //     B_perm = [ A_KS  0 ]        B_perm^-1 = [ G        0 ]
    //              [ A_LS -I ],                   [ A_LS G  -I ],  G = A_KS^-1.
    //
    // Only the k x k structural block A_KS needs dense inversion.
    void refactorize() {
        std::vector<int> struct_positions, slack_positions;
        std::vector<char> row_has_slack(m_, 0);
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] >= n_) {
                slack_positions.push_back(i);
                row_has_slack[basis_[i] - n_] = 1;
            } else {
                struct_positions.push_back(i);
            }
        }
        std::vector<int> k_rows;  // rows not covered by a basic slack
        for (int row = 0; row < m_; ++row) {
            if (!row_has_slack[row]) k_rows.push_back(row);
        }
        const int k = int(struct_positions.size());
        if (int(k_rows.size()) != k) {
            recover_from_singular_basis();
            return;
        }

        std::vector<int> row_to_k(m_, -1);
        for (int i = 0; i < k; ++i) row_to_k[k_rows[i]] = i;

        // Invert A_KS by Gauss-Jordan with partial pivoting.
        std::vector<double> mat(std::size_t(k) * k, 0.0);
        std::vector<double> inv(std::size_t(k) * k, 0.0);
        for (int cidx = 0; cidx < k; ++cidx) {
            for (int row : cols_[basis_[struct_positions[cidx]]]) {
                if (row_to_k[row] >= 0) mat[std::size_t(row_to_k[row]) * k + cidx] = 1.0;
            }
            inv[std::size_t(cidx) * k + cidx] = 1.0;
        }
        for (int col = 0; col < k; ++col) {
            int piv = -1;
            double best = 1e-10;
            for (int i = col; i < k; ++i) {
                const double v = std::fabs(mat[std::size_t(i) * k + col]);
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (piv < 0) {
                recover_from_singular_basis();
                return;
            }
            if (piv != col) {
                for (int x = 0; x < k; ++x) {
                    std::swap(mat[std::size_t(piv) * k + x], mat[std::size_t(col) * k + x]);
                    std::swap(inv[std::size_t(piv) * k + x], inv[std::size_t(col) * k + x]);
                }
            }
            const double inv_p = 1.0 / mat[std::size_t(col) * k + col];
            for (int x = 0; x < k; ++x) {
                mat[std::size_t(col) * k + x] *= inv_p;
                inv[std::size_t(col) * k + x] *= inv_p;
            }
            for (int i = 0; i < k; ++i) {
                if (i == col) continue;
                const double f = mat[std::size_t(i) * k + col];
                if (f == 0.0) continue;
                for (int x = 0; x < k; ++x) {
                    mat[std::size_t(i) * k + x] -= f * mat[std::size_t(col) * k + x];
                    inv[std::size_t(i) * k + x] -= f * inv[std::size_t(col) * k + x];
                }
            }
        }

        // Scatter the block inverse back into natural coordinates.
        // Structural position p_i holds row i of G spread over K-columns;
        // slack position q_j holds row (A_LS G)_j minus its own unit column.
        binv_.assign(std::size_t(m_) * m_, 0.0);
        for (int i = 0; i < k; ++i) {
            double* row = &binv_[std::size_t(struct_positions[i]) * m_];
            for (int x = 0; x < k; ++x) row[k_rows[x]] = inv[std::size_t(i) * k + x];
        }
        for (int slack_pos : slack_positions) {
            const int slack_row = basis_[slack_pos] - n_;
            double* row = &binv_[std::size_t(slack_pos) * m_];
            // (A_LS G) row: sum G rows of the structural columns covering
            // slack_row, i.e. for each structural position, its column's
            // entry at slack_row times the corresponding G row.
            for (int i = 0; i < k; ++i) {
                const int j = basis_[struct_positions[i]];
                bool covers = false;
                for (int r2 : cols_[j]) {
                    if (r2 == slack_row) {
                        covers = true;
                        break;
                    }
                }
                if (!covers) continue;
                const double* g_row = &inv[std::size_t(i) * k];
                for (int x = 0; x < k; ++x) row[k_rows[x]] += g_row[x];
            }
            row[slack_row] -= 1.0;
        }

        compute_xb();
        // Exact steepest-edge weights and reduced costs from scratch.
        for (int i = 0; i < m_; ++i) {
            const double* row = &binv_[std::size_t(i) * m_];
            double norm = 0.0;
            for (int x = 0; x < m_; ++x) norm += row[x] * row[x];
            beta_[i] = std::max(norm, 1e-10);
        }
        std::vector<double> y(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] >= n_) continue;
            const double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &binv_[std::size_t(i) * m_];
            for (int x = 0; x < m_; ++x) y[x] += cb * row[x];
        }
        for (int j = 0; j < n_ + m_; ++j) {
            if (in_basis_[j]) {
                d_[j] = 0.0;
            } else if (j >= n_) {
                d_[j] = y[j - n_];
            } else {
                double dot = 0.0;
                for (int row : cols_[j]) dot += y[row];
                d_[j] = cost_[j] - dot;
            }
            if (j < n_ + m_ && !in_basis_[j] && d_[j] < 0.0 && d_[j] > -1e-9) d_[j] = 0.0;
        }
    }

    int m_ = 0;
    int n_ = 0;
    std::vector<std::vector<int>> cols_;
    std::vector<double> true_cost_;
    std::vector<double> cost_;  // perturbed on large instances
    std::vector<double> b_;
    std::vector<int> basis_;
    std::vector<char> in_basis_;
    std::vector<double> d_;
    std::vector<double> binv_;
    std::vector<double> xb_;
    std::vector<double> beta_;  // dual steepest-edge weights
    std::vector<double> work_;
    std::vector<double> alpha_;
    int singular_recoveries_ = 0;
};

}  // namespace rtune

#endif  // RESOURCETUNE_SIMPLEX_HPP
