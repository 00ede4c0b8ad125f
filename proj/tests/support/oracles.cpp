#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rsreg/rng.hpp"

namespace oracle {

namespace {

std::vector<std::size_t> descending_order(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ma = std::abs(v[a]), mb = std::abs(v[b]);
        return ma != mb ? ma > mb : a < b;
    });
    return order;
}

}  // namespace

double slope_norm_direct(std::span<const double> v, std::span<const double> w) {
    Vector mags(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    double s = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i) s += w[i] * mags[i];
    return s;
}

double prox_objective(std::span<const double> b, std::span<const double> v,
                      std::span<const double> w, double t) {
    double q = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) q += (b[i] - v[i]) * (b[i] - v[i]);
    return 0.5 * q + t * slope_norm_direct(b, w);
}

Vector prox_block_enumeration(std::span<const double> v, std::span<const double> w, double t) {
    const std::size_t k = v.size();
    const auto order = descending_order(v);
    Vector c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = std::abs(v[order[i]]) - t * w[i];

    // The minimizer, in the sorted domain, is constant on consecutive blocks
    // (each block at the mean of its shifted values) followed by a zero tail.
    // Enumerate every (block composition, tail cut) and keep the best.
    Vector best;
    double best_obj = std::numeric_limits<double>::infinity();
    Vector sorted_b(k);
    for (std::size_t p = 0; p <= k; ++p) {  // p = number of nonzero coordinates
        const std::size_t comps = p == 0 ? 1 : (std::size_t{1} << (p - 1));
        for (std::size_t mask = 0; mask < comps; ++mask) {
            // Bit i of mask set => a block boundary between i and i+1.
            std::fill(sorted_b.begin(), sorted_b.end(), 0.0);
            std::size_t start = 0;
            bool feasible = true;
            double prev = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < p && feasible; ++i) {
                if (i + 1 == p || (mask >> i) & 1U) {
                    double mean = 0.0;
                    for (std::size_t j = start; j <= i; ++j) mean += c[j];
                    mean /= static_cast<double>(i - start + 1);
                    if (mean < 0.0 || mean > prev + 1e-15) {
                        feasible = false;
                        break;
                    }
                    for (std::size_t j = start; j <= i; ++j) sorted_b[j] = mean;
                    prev = mean;
                    start = i + 1;
                }
            }
            if (!feasible) continue;
            Vector b(k, 0.0);
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j = order[i];
                b[j] = v[j] < 0.0 ? -sorted_b[i] : sorted_b[i];
            }
            const double obj = prox_objective(b, v, w, t);
            if (obj < best_obj) {
                best_obj = obj;
                best = std::move(b);
            }
        }
    }
    return best;
}

Vector prox_grid_search(std::span<const double> v, std::span<const double> w, double t) {
    const std::size_t k = v.size();
    if (k > 2) throw std::invalid_argument("grid oracle supports d <= 2 only");

    Vector lo(k), hi(k), best(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        lo[j] = std::min(-5.0, v[j] - 1.0);
        hi[j] = std::max(5.0, v[j] + 1.0);
    }
    double best_obj = std::numeric_limits<double>::infinity();
    const int pts = 81;
    double step = 0.0;
    for (int level = 0; level < 8; ++level) {
        Vector b(k);
        Vector cand(k);
        double level_best = std::numeric_limits<double>::infinity();
        step = (hi[0] - lo[0]) / (pts - 1);
        if (k == 1) {
            for (int i0 = 0; i0 < pts; ++i0) {
                b[0] = lo[0] + i0 * step;
                const double obj = prox_objective(b, v, w, t);
                if (obj < level_best) level_best = obj, cand = b;
            }
        } else {
            const double step1 = (hi[1] - lo[1]) / (pts - 1);
            for (int i0 = 0; i0 < pts; ++i0) {
                b[0] = lo[0] + i0 * step;
                for (int i1 = 0; i1 < pts; ++i1) {
                    b[1] = lo[1] + i1 * step1;
                    const double obj = prox_objective(b, v, w, t);
                    if (obj < level_best) level_best = obj, cand = b;
                }
            }
        }
        best = cand;
        best_obj = level_best;
        for (std::size_t j = 0; j < k; ++j) {
            const double width = 3.0 * (hi[j] - lo[j]) / (pts - 1);
            lo[j] = best[j] - width;
            hi[j] = best[j] + width;
        }
        if (step <= 1e-4) break;
    }

    // Coordinate-wise quadratic refinement; accepted only when it improves.
    for (int pass = 0; pass < 4; ++pass) {
        for (std::size_t j = 0; j < k; ++j) {
            const double h = 1e-5;
            Vector b = best;
            b[j] = best[j] + h;
            const double fp = prox_objective(b, v, w, t);
            b[j] = best[j] - h;
            const double fm = prox_objective(b, v, w, t);
            const double curv = fp - 2.0 * best_obj + fm;
            if (curv <= 0.0) continue;
            b[j] = best[j] - 0.5 * h * (fp - fm) / curv;
            const double obj = prox_objective(b, v, w, t);
            if (obj < best_obj) {
                best_obj = obj;
                best = b;
            }
        }
    }
    return best;
}

bool slope_subgradient_ok(std::span<const double> v, std::span<const double> b,
                          std::span<const double> w, double t, double tol) {
    const std::size_t k = v.size();
    Vector g(k);
    for (std::size_t i = 0; i < k; ++i) g[i] = (v[i] - b[i]) / t;
    // Dual-ball membership: cumulative sorted |g| below cumulative w.
    Vector mg(k);
    for (std::size_t i = 0; i < k; ++i) mg[i] = std::abs(g[i]);
    std::sort(mg.begin(), mg.end(), std::greater<double>());
    double cg = 0.0, cw = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        cg += mg[i];
        cw += w[i];
        if (cg > cw + tol * (1.0 + cw)) return false;
    }
    // Homogeneity equality <g, b> = slope_norm(b).
    double inner = 0.0;
    for (std::size_t i = 0; i < k; ++i) inner += g[i] * b[i];
    const double norm = slope_norm_direct(b, w);
    return std::abs(inner - norm) <= tol * (1.0 + norm);
}

Vector nelder_mead(const std::function<double(std::span<const double>)>& f, Vector start,
                   double scale, int max_iters, double ftol) {
    const std::size_t d = start.size();
    const std::size_t np = d + 1;
    std::vector<Vector> simplex(np, start);
    for (std::size_t j = 0; j < d; ++j) simplex[j + 1][j] += scale;
    Vector fv(np);
    for (std::size_t i = 0; i < np; ++i) fv[i] = f(simplex[i]);

    for (int it = 0; it < max_iters; ++it) {
        std::vector<std::size_t> idx(np);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = idx[0], worst = idx[np - 1], second = idx[np - 2];
        if (std::abs(fv[worst] - fv[best]) <= ftol * (1.0 + std::abs(fv[best]))) break;

        Vector centroid(d, 0.0);
        for (std::size_t i = 0; i < np; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j];
        }
        for (auto& cj : centroid) cj /= static_cast<double>(d);

        const auto blend = [&](double coef) {
            Vector p(d);
            for (std::size_t j = 0; j < d; ++j)
                p[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
            return p;
        };
        Vector refl = blend(-1.0);
        const double fr = f(refl);
        if (fr < fv[best]) {
            Vector expd = blend(-2.0);
            const double fe = f(expd);
            if (fe < fr) simplex[worst] = std::move(expd), fv[worst] = fe;
            else simplex[worst] = std::move(refl), fv[worst] = fr;
        } else if (fr < fv[second]) {
            simplex[worst] = std::move(refl), fv[worst] = fr;
        } else {
            Vector contr = blend(fr < fv[worst] ? -0.5 : 0.5);
            const double fc = f(contr);
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = std::move(contr), fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i < np; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < d; ++j)
                        simplex[i][j] = 0.5 * (simplex[i][j] + simplex[best][j]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < np; ++i)
        if (fv[i] < fv[best]) best = i;
    return simplex[best];
}

Vector coordinate_polish(const std::function<double(std::span<const double>)>& f, Vector x,
                         const std::vector<double>& steps, int span, int passes) {
    double fx = f(x);
    for (double step : steps) {
        for (int pass = 0; pass < passes; ++pass) {
            bool improved = false;
            for (std::size_t j = 0; j < x.size(); ++j) {
                Vector cand = x;
                for (int k = -span; k <= span; ++k) {
                    if (k == 0) continue;
                    cand[j] = x[j] + k * step;
                    const double fc = f(cand);
                    if (fc < fx) {
                        fx = fc;
                        x[j] = cand[j];
                        improved = true;
                    }
                }
            }
            if (!improved) break;
        }
    }
    return x;
}

Vector least_squares(const rsreg::Matrix& X, std::span<const double> y) {
    const std::size_t d = X.cols();
    rsreg::Matrix a(d, d);
    Vector b(d, 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto row = X.row(i);
        for (std::size_t p = 0; p < d; ++p) {
            b[p] += row[p] * y[i];
            for (std::size_t q = p; q < d; ++q) a(p, q) += row[p] * row[q];
        }
    }
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < p; ++q) a(p, q) = a(q, p);

    // Cholesky a = L L^T.
    rsreg::Matrix l(d, d);
    for (std::size_t p = 0; p < d; ++p) {
        for (std::size_t q = 0; q <= p; ++q) {
            double s = a(p, q);
            for (std::size_t r = 0; r < q; ++r) s -= l(p, r) * l(q, r);
            if (p == q) {
                if (s <= 0.0) throw std::runtime_error("least_squares: X^T X not SPD");
                l(p, p) = std::sqrt(s);
            } else {
                l(p, q) = s / l(q, q);
            }
        }
    }
    Vector z(d);
    for (std::size_t p = 0; p < d; ++p) {
        double s = b[p];
        for (std::size_t r = 0; r < p; ++r) s -= l(p, r) * z[r];
        z[p] = s / l(p, p);
    }
    Vector beta(d);
    for (std::size_t pi = d; pi-- > 0;) {
        double s = z[pi];
        for (std::size_t r = pi + 1; r < d; ++r) s -= l(r, pi) * beta[r];
        beta[pi] = s / l(pi, pi);
    }
    return beta;
}

InterceptOracleResult intercept_multistart(std::span<const double> z,
                                           std::span<const double> iota, double c_iota,
                                           int starts, std::uint64_t seed) {
    const std::size_t m = z.size();
    const double root_m = std::sqrt(static_cast<double>(m));
    const auto objective = [&](double mu, std::span<const double> theta) {
        double q = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = z[i] - mu - root_m * theta[i];
            q += r * r;
        }
        return std::sqrt(q) + c_iota * slope_norm_direct(theta, iota);
    };
    // Exact theta block step: iterate the variational (sigma, prox) pair to a
    // fixed point for the current mu.
    const auto theta_step = [&](double mu, Vector theta) {
        const rsreg::SlopeWeights wts{Vector(iota.begin(), iota.end())};
        Vector shifted(m);
        for (std::size_t i = 0; i < m; ++i) shifted[i] = (z[i] - mu) / root_m;
        for (int it = 0; it < 400; ++it) {
            double q = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double r = z[i] - mu - root_m * theta[i];
                q += r * r;
            }
            const double sigma = std::max(1e-12, std::sqrt(q));
            Vector next = rsreg::prox_sorted_l1(shifted, wts, c_iota * sigma / m);
            double diff = 0.0;
            for (std::size_t i = 0; i < m; ++i) diff = std::max(diff, std::abs(next[i] - theta[i]));
            theta = std::move(next);
            if (diff < 1e-14) break;
        }
        return theta;
    };

    double zmin = z[0], zmax = z[0];
    for (double zi : z) zmin = std::min(zmin, zi), zmax = std::max(zmax, zi);

    rsreg::Rng rng(seed);
    InterceptOracleResult best;
    best.objective = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
        double mu = s == 0 ? 0.0 : zmin + (zmax - zmin) * rng.uniform();
        Vector theta(m, 0.0);
        double obj = objective(mu, theta);
        for (int outer = 0; outer < 200; ++outer) {
            theta = theta_step(mu, std::move(theta));
            double mean = 0.0;
            for (std::size_t i = 0; i < m; ++i) mean += z[i] - root_m * theta[i];
            mu = mean / static_cast<double>(m);
            const double next = objective(mu, theta);
            if (std::abs(next - obj) <= 1e-13 * (1.0 + std::abs(obj))) {
                obj = next;
                break;
            }
            obj = next;
        }
        // Grid refinement of mu at step 1e-4 (then finer) around the fixed point.
        for (double step : {1e-4, 1e-6, 1e-8}) {
            bool improved = true;
            while (improved) {
                improved = false;
                for (int k : {-1, 1}) {
                    const double cand = mu + k * step;
                    const double fc = objective(cand, theta);
                    if (fc < obj) {
                        obj = fc;
                        mu = cand;
                        improved = true;
                    }
                }
            }
            theta = theta_step(mu, std::move(theta));
            obj = objective(mu, theta);
        }
        if (obj < best.objective) {
            best.objective = obj;
            best.mu = mu;
            best.theta = theta;
        }
    }
    return best;
}

}  // namespace oracle
