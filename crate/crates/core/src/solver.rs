//! Derivative-free local search: a standard Nelder-Mead simplex ascent used
//! by the pointwise transform solvers and the moment-bound optimizer.
//!
//! Objectives may return `-inf` (or NaN, treated as `-inf`) to reject
//! infeasible points; the simplex contracts back into the feasible region.

/// Maximize `f` from `x0` with an axis-aligned initial simplex of edge
/// `initial_step`. Stops when the simplex diameter falls below `step_tol` or
/// after `max_iters` iterations. Returns the best vertex and its value.
pub fn nelder_mead_max<F>(
    f: F,
    x0: &[f64],
    initial_step: f64,
    step_tol: f64,
    max_iters: usize,
) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    if n == 0 {
        let v = f(x0);
        return (x0.to_vec(), v);
    }
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x)).collect();

    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const BETA: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    for _ in 0..max_iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let diameter = simplex
            .iter()
            .map(|x| {
                x.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0_f64, f64::max);
        if diameter < step_tol {
            break;
        }
        if values[best] == f64::NEG_INFINITY {
            break; // entire simplex infeasible
        }

        let mut centroid = vec![0.0; n];
        for &i in order.iter().take(n) {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v / n as f64;
            }
        }

        let reflected: Vec<f64> = centroid
            .iter()
            .zip(&simplex[worst])
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        let fr = eval(&reflected);

        if fr > values[best] {
            let expanded: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + GAMMA * (c - w))
                .collect();
            let fe = eval(&expanded);
            if fe > fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr > values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let (contracted, toward_reflection) = if fr > values[worst] {
                let c: Vec<f64> = centroid
                    .iter()
                    .zip(&reflected)
                    .map(|(c, r)| c + BETA * (r - c))
                    .collect();
                (c, true)
            } else {
                let c: Vec<f64> = centroid
                    .iter()
                    .zip(&simplex[worst])
                    .map(|(c, w)| c + BETA * (w - c))
                    .collect();
                (c, false)
            };
            let fc = eval(&contracted);
            let accept = if toward_reflection { fc >= fr } else { fc > values[worst] };
            if accept {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                let best_point = simplex[best].clone();
                for i in 0..=n {
                    if i == best {
                        continue;
                    }
                    for (v, b) in simplex[i].iter_mut().zip(&best_point) {
                        *v = b + SIGMA * (*v - b);
                    }
                    values[i] = eval(&simplex[i]);
                }
            }
        }
    }

    let mut best_idx = 0;
    for i in 1..=n {
        if values[i] > values[best_idx] {
            best_idx = i;
        }
    }
    (simplex[best_idx].clone(), values[best_idx])
}

/// Evaluate `candidates`, refine the `starts` best by Nelder-Mead, and return
/// the overall best point and value (refined or raw).
pub fn multi_start_max<F>(
    f: F,
    candidates: &[Vec<f64>],
    starts: usize,
    initial_step: f64,
    step_tol: f64,
    max_iters: usize,
) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    assert!(!candidates.is_empty(), "need at least one candidate");
    let mut scored: Vec<(f64, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let v = f(c);
            (if v.is_nan() { f64::NEG_INFINITY } else { v }, i)
        })
        .collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let mut best_x = candidates[scored[0].1].clone();
    let mut best_v = scored[0].0;
    for &(v0, idx) in scored.iter().take(starts.max(1)) {
        if v0 == f64::NEG_INFINITY {
            break; // remaining candidates are infeasible too
        }
        let (x, v) = nelder_mead_max(&f, &candidates[idx], initial_step, step_tol, max_iters);
        if v > best_v {
            best_v = v;
            best_x = x;
        }
    }
    (best_x, best_v)
}
