//! Derivative-free Nelder-Mead minimizer with dimension-adaptive coefficients,
//! a golden-section line search for coordinate polishing, and a damped Newton
//! polish on a difference-quotient quadratic model for ill-conditioned valleys.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct SimplexOptions {
    pub max_evaluations: usize,
    /// Stop once `f_worst - f_best` falls below this, relative to `1 + |f_best|`.
    pub f_tol: f64,
    /// ... and the simplex diameter (max-norm) falls below this.
    pub x_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_evaluations: 20_000,
            f_tol: 1e-15,
            x_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub diameter: f64,
    pub converged: bool,
}

fn diameter(points: &[Vec<f64>]) -> f64 {
    let best = &points[0];
    points[1..]
        .iter()
        .flat_map(|p| p.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}

/// Minimize `f` starting from `x0` with initial edge lengths `steps`.
///
/// Infeasible points should evaluate to `f64::INFINITY`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    steps: &[f64],
    options: &SimplexOptions,
) -> SimplexOutcome {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut points: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += steps[i];
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| f(p)).collect();
    let mut evaluations = n + 1;
    let mut iterations = 0;

    let mut order: Vec<usize> = (0..=n).collect();
    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        points = order.iter().map(|&i| points[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        for (k, slot) in order.iter_mut().enumerate() {
            *slot = k;
        }

        let spread = values[n] - values[0];
        let diam = diameter(&points);
        let scale = points[0].iter().fold(1.0f64, |m, v| m.max(v.abs()));
        // a simplex collapsed to rounding level cannot make progress
        let collapsed = diam <= 4.0 * f64::EPSILON * scale;
        if (spread.abs() <= options.f_tol * (1.0 + values[0].abs()) && diam <= options.x_tol) || collapsed {
            return SimplexOutcome {
                x: points[0].clone(),
                f: values[0],
                evaluations,
                iterations,
                diameter: diam,
                converged: diam <= options.x_tol,
            };
        }
        if evaluations >= options.max_evaluations {
            return SimplexOutcome {
                x: points[0].clone(),
                f: values[0],
                evaluations,
                iterations,
                diameter: diam,
                converged: false,
            };
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for p in &points[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&points[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let fr = f(&xr);
        evaluations += 1;
        if fr < values[0] {
            let xe = along(alpha * beta);
            let fe = f(&xe);
            evaluations += 1;
            if fe < fr {
                points[n] = xe;
                values[n] = fe;
            } else {
                points[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            points[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = along(alpha * gamma);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(-gamma);
            let fc = f(&xc);
            (xc, fc)
        };
        evaluations += 1;
        if fc < values[n].min(fr) {
            points[n] = xc;
            values[n] = fc;
            continue;
        }
        // shrink towards the best vertex
        let best = points[0].clone();
        for k in 1..=n {
            for (x, b) in points[k].iter_mut().zip(&best) {
                *x = b + delta * (*x - b);
            }
            values[k] = f(&points[k]);
        }
        evaluations += n;
    }
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Damped Newton iterations on a quadratic model built from central
/// differences. `scales` sets the per-coordinate difference steps.
///
/// Returns the improved point, its value and the number of model updates.
pub fn newton_polish<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], scales: &[f64], max_iter: usize) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut damping = 0.0;
    let mut updates = 0;
    for _ in 0..max_iter {
        let hg: Vec<f64> = scales.iter().map(|s| 1e-5 * s).collect();
        let hh: Vec<f64> = scales.iter().map(|s| 1e-3 * s).collect();
        let mut eval = |dx: &[(usize, f64)]| {
            let mut y = x.clone();
            for &(i, d) in dx {
                y[i] += d;
            }
            f(&y)
        };
        let mut g = DVector::zeros(n);
        let mut h = DMatrix::zeros(n, n);
        for i in 0..n {
            g[i] = (eval(&[(i, hg[i])]) - eval(&[(i, -hg[i])])) / (2.0 * hg[i]);
            let up = eval(&[(i, hh[i])]);
            let down = eval(&[(i, -hh[i])]);
            h[(i, i)] = (up - 2.0 * fx + down) / (hh[i] * hh[i]);
            for j in 0..i {
                let pp = eval(&[(i, hh[i]), (j, hh[j])]);
                let pm = eval(&[(i, hh[i]), (j, -hh[j])]);
                let mp = eval(&[(i, -hh[i]), (j, hh[j])]);
                let mm = eval(&[(i, -hh[i]), (j, -hh[j])]);
                let v = (pp - pm - mp + mm) / (4.0 * hh[i] * hh[j]);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        if g.iter().chain(h.iter()).any(|v| !v.is_finite()) {
            break;
        }
        let diag_scale = (0..n).map(|i| h[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
        let mut accepted = false;
        for _ in 0..12 {
            let mut m = h.clone();
            for i in 0..n {
                m[(i, i)] += damping * diag_scale;
            }
            let Some(chol) = m.cholesky() else {
                damping = (damping * 10.0).max(1e-10);
                continue;
            };
            let step = chol.solve(&(-&g));
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let ft = f(&trial);
            if ft < fx {
                let gain = fx - ft;
                x = trial;
                fx = ft;
                damping *= 0.1;
                accepted = true;
                updates += 1;
                if gain <= 1e-16 * (1.0 + fx.abs()) {
                    return (x, fx, updates);
                }
                break;
            }
            damping = (damping * 10.0).max(1e-10);
        }
        if !accepted {
            break;
        }
    }
    (x, fx, updates)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = nelder_mead(
            f,
            &[-1.2, 1.0],
            &[0.1, 0.1],
            &SimplexOptions {
                max_evaluations: 10_000,
                f_tol: 1e-20,
                x_tol: 1e-10,
            },
        );
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-7 && (out.x[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn quadratic_in_seven_dimensions() {
        let f = |x: &[f64]| {
            x.iter()
                .enumerate()
                .map(|(i, v)| (i as f64 + 1.0) * (v - 0.1 * i as f64).powi(2))
                .sum::<f64>()
        };
        let out = nelder_mead(f, &[1.0; 7], &[0.5; 7], &SimplexOptions::default());
        for (i, v) in out.x.iter().enumerate() {
            assert!((v - 0.1 * i as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn infeasible_region_is_avoided() {
        let f = |x: &[f64]| if x[0] < 0.5 { f64::INFINITY } else { (x[0] - 0.2).powi(2) + x[1] * x[1] };
        let out = nelder_mead(f, &[2.0, 1.0], &[0.3, 0.3], &SimplexOptions::default());
        assert!(out.x[0] >= 0.5 && (out.x[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn newton_polish_on_narrow_valley() {
        // condition number 1e8
        let f = |x: &[f64]| {
            let u = x[0] + x[1];
            let v = x[0] - x[1] - 0.2;
            u * u + 1e-8 * v * v
        };
        let start = [0.3, 0.2];
        let (x, fx, _) = newton_polish(f, &start, &[1.0, 1.0], 20);
        assert!((x[0] - 0.1).abs() < 1e-6 && (x[1] + 0.1).abs() < 1e-6, "{x:?}");
        assert!(fx.abs() < 1e-20);
    }

    #[test]
    fn golden() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-10, 200);
        assert!((x - 0.3).abs() < 1e-7 && (fx - 1.0).abs() < 1e-14);
    }
}
