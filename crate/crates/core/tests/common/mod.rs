//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use bic_signal::lp::LpProblem;
use bic_signal::{Action, DiscretePrior, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random instance: `d <= 3` features, `1..=3` costly actions, `1..=12` support points.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (Instance, DiscretePrior) {
    let dim = rng.random_range(1..=3);
    let m = rng.random_range(1..=3);
    let actions = (0..m)
        .map(|i| {
            let delta = (0..dim).map(|_| rng.random_range(-0.5..2.0)).collect();
            Action::new(
                format!("a{}", i + 1),
                delta,
                rng.random_range(0.0..2.5),
                rng.random_range(0.0..1.0),
            )
        })
        .collect();
    let x0 = (0..dim).map(|_| rng.random_range(-1.5..1.0)).collect();
    let instance = Instance::with_null(dim, actions, x0).unwrap();
    let n = rng.random_range(1..=12);
    let support = (0..n)
        .map(|_| (0..=dim).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut probs: Vec<f64> = raw.iter().map(|p| p / total).collect();
    let drift = 1.0 - probs.iter().sum::<f64>();
    probs[n - 1] += drift;
    (instance, DiscretePrior::new(support, probs).unwrap())
}

/// Solves a square linear system by Gaussian elimination with partial pivoting.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f != 0.0 {
                    let pivot_row = a[col].clone();
                    for (v, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                        *v -= f * p;
                    }
                    b[row] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Brute-force optimum over all basic feasible points. `None` means no
/// feasible vertex (infeasible, for problems with a bounded region).
pub fn vertex_enumeration(p: &LpProblem) -> Option<f64> {
    let n = p.num_vars();
    // every constraint as (row, rhs, is_equality); x >= 0 included
    let mut cons: Vec<(Vec<f64>, f64, bool)> = Vec::new();
    for (row, &h) in p.ineq_lhs.iter().zip(&p.ineq_rhs) {
        cons.push((row.clone(), h, false));
    }
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        cons.push((e, 0.0, false));
    }
    let eqs: Vec<(Vec<f64>, f64)> = p
        .eq_lhs
        .iter()
        .cloned()
        .zip(p.eq_rhs.iter().copied())
        .collect();
    let free = n.checked_sub(eqs.len())?;
    let feasible = |x: &[f64]| {
        let dot = |r: &[f64]| r.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        cons.iter().all(|(r, h, _)| dot(r) >= h - 1e-9)
            && eqs.iter().all(|(r, b)| (dot(r) - b).abs() <= 1e-9)
    };
    let mut best: Option<f64> = None;
    for pick in subsets(cons.len(), free) {
        let mut a: Vec<Vec<f64>> = eqs.iter().map(|(r, _)| r.clone()).collect();
        let mut b: Vec<f64> = eqs.iter().map(|(_, v)| *v).collect();
        for &i in &pick {
            a.push(cons[i].0.clone());
            b.push(cons[i].1);
        }
        let Some(x) = solve_square(a, b) else {
            continue;
        };
        if feasible(&x) {
            let v: f64 = p.objective.iter().zip(&x).map(|(c, xi)| c * xi).sum();
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    }
    best
}

/// Random LP with a box row keeping the feasible set bounded.
pub fn random_lp(rng: &mut ChaCha8Rng) -> LpProblem {
    let n = rng.random_range(1..=6);
    let rows = rng.random_range(0..=5);
    let mut p = LpProblem::new((0..n).map(|_| rng.random_range(-3.0..3.0)).collect());
    p.add_le(vec![1.0; n], rng.random_range(1.0..10.0));
    for _ in 0..rows {
        let row: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.2) {
                    0.0
                } else {
                    rng.random_range(-3.0..3.0)
                }
            })
            .collect();
        p.add_ge(row, rng.random_range(-4.0..2.0));
    }
    if n >= 2 && rng.random_bool(0.3) {
        let row: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
        p.add_eq(row, rng.random_range(0.0..3.0));
    }
    p
}

/// Subject utility computed straight from the classifier, independent of region keys.
pub fn direct_utility(instance: &Instance, theta: &[f64], action: usize) -> f64 {
    let a = &instance.actions()[action];
    let score: f64 = instance
        .x0()
        .iter()
        .zip(&a.delta_x)
        .zip(theta)
        .map(|((x, d), t)| (x + d) * t)
        .sum::<f64>()
        + theta[instance.dim()];
    (if score >= 0.0 { 1.0 } else { -1.0 }) - a.cost
}
