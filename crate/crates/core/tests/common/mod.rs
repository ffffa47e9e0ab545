//! Shared checks for the property and acceptance suites.
#![allow(dead_code)]

use ecbs::*;

/// Dense Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let m = b.len();
    for k in 0..m {
        let p = (k..m).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..m {
            let f = a[i][k] / a[k][k];
            for j in k..m {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        let s: f64 = (i + 1..m).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Fully implicit Crank-Nicolson collocation step, nonlinear terms at the new
/// level resolved by Picard iteration. Returns the new coefficients.
pub fn picard_step(field: &Field64, p: &Params64, bc_left: f64, bc_right: f64) -> Vec<f64> {
    let n = field.mesh().n_cells();
    let w = field.weights();
    let (half, q) = (p.dt / 2.0, p.q as i32);
    let mut rhs0 = vec![0.0; n + 1];
    for i in 0..=n {
        let u = field.value_at_knot(i).unwrap();
        let ux = field.deriv_at_knot(i).unwrap();
        let uxx = field.second_deriv_at_knot(i).unwrap();
        rhs0[i] = u + half * (-p.alpha * u.powi(q) * ux + p.mu * uxx + p.eta * (u - u.powi(q + 1)));
    }
    let mut v: Vec<f64> = field.knot_values();
    let mut delta = field.delta().to_vec();
    for _ in 0..500 {
        // unknowns d_{-1}..d_{N+1}; rows: left bc, collocation 0..=N, right bc
        let m = n + 3;
        let mut a = vec![vec![0.0; m]; m];
        let mut b = vec![0.0; m];
        a[0][0] = w.a1;
        a[0][1] = w.a2;
        a[0][2] = w.a1;
        b[0] = bc_left;
        for i in 0..=n {
            let vq = v[i].powi(q);
            let c = 1.0 - half * p.eta + half * p.eta * vq;
            let adv = half * p.alpha * vq;
            let diff = half * p.mu;
            a[i + 1][i] = c * w.a1 + adv * w.b1 - diff * w.g1;
            a[i + 1][i + 1] = c * w.a2 - diff * w.g2;
            a[i + 1][i + 2] = c * w.a1 - adv * w.b1 - diff * w.g1;
            b[i + 1] = rhs0[i];
        }
        a[m - 1][n] = w.a1;
        a[m - 1][n + 1] = w.a2;
        a[m - 1][n + 2] = w.a1;
        b[m - 1] = bc_right;
        let next = dense_solve(a, b);
        let change = next.iter().zip(&delta).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
        delta = next;
        v = (0..=n).map(|i| w.a1 * delta[i] + w.a2 * delta[i + 1] + w.a1 * delta[i + 2]).collect();
        if change <= 1e-13 {
            break;
        }
    }
    delta
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Outcome of one check: a one-line summary either way.
pub type Check = std::result::Result<String, String>;

fn verdict(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Halving dt from 4e-3 to 2e-3 on Example 1 (q = 1, alpha = eta = 1,
/// N = 64, t = 0.5). Errors are taken against a same-mesh run at dt/32 so the
/// spatial error drops out.
pub fn temporal_order() -> Check {
    let p = example1(1.0, 1.0, 1).unwrap();
    let run = |dt: f64| p.solve(64, 0.0, dt, 0.5, &[0.5]).unwrap().snapshots.remove(0).knot_values;
    let reference = run(1.25e-4);
    let e1 = max_diff(&run(4e-3), &reference);
    let e2 = max_diff(&run(2e-3), &reference);
    let ratio = e1 / e2;
    let order = ratio.log2();
    verdict(
        (3.2..=4.8).contains(&ratio) && (1.6..=2.4).contains(&order),
        format!("E(4e-3)={e1:.3e} E(2e-3)={e2:.3e} ratio={ratio:.3} order={order:.3}"),
    )
}

/// One linearised step against the Picard-converged implicit step; the gap
/// must shrink at least 3.2x when dt halves.
pub fn linearization_consistency() -> Check {
    let mut out = Vec::new();
    let mut ok = true;
    for &(alpha, eta, q) in &[(1.0, 1.0, 1u32), (1.0, 1.0, 2), (0.5, 2.0, 4)] {
        let p = example1(alpha, eta, q).unwrap();
        let mesh = p.mesh(32).unwrap();
        let f = fit_initial(&mesh, 0.1, &p.initial).unwrap();
        let gap = |dt: f64| {
            let params = p.step_params(dt).unwrap();
            let (l, r) = (p.bc)(dt);
            let lin = step(&f, &params, l, r).unwrap();
            max_diff(lin.delta(), &picard_step(&f, &params, l, r))
        };
        let (g1, g2) = (gap(2e-2), gap(1e-2));
        let ratio = g1 / g2;
        ok &= ratio >= 3.2;
        out.push(format!("q={q}: {g1:.2e}/{g2:.2e}={ratio:.2}"));
    }
    verdict(ok, out.join(" "))
}

/// Zero dynamics with fixed boundary data leave the field unchanged.
pub fn zero_dynamics_identity() -> Check {
    let mesh = Mesh64::new(0.0, 1.0, 16).unwrap();
    let d: Vec<f64> = (0..19).map(|k| 0.3 + (k as f64 * 0.9).sin()).collect();
    let f0 = Field64::new(mesh, -0.4, d).unwrap();
    let (l, r) = (f0.value_at_knot(0).unwrap(), f0.value_at_knot(16).unwrap());
    let p = Params64::new(0.0, 0.0, 0.0, 1, 1e-3).unwrap();
    let mut stepper = CrankNicolson::new(p, 16).unwrap();
    let mut f = f0.clone();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let g = stepper.step(&f, l, r).unwrap();
        worst = worst.max(max_diff(g.delta(), f.delta()));
        f = g;
    }
    verdict(worst <= 1e-13, format!("max per-step change {worst:.2e} over 1000 steps"))
}

/// `u = 1` is a fixed point of the full equation.
pub fn equilibrium_preserved() -> Check {
    let mesh = Mesh64::new(0.0, 1.0, 16).unwrap();
    let mut worst = 0.0f64;
    for q in [1u32, 2, 4] {
        for eta in [1.0, 10.0] {
            let p = Params64::new(1.0, 0.5, eta, q, 1e-3).unwrap();
            let mut stepper = CrankNicolson::new(p, 16).unwrap();
            let mut f = Field64::constant(mesh, 0.2, 1.0).unwrap();
            for _ in 0..1000 {
                f = stepper.step(&f, 1.0, 1.0).unwrap();
            }
            worst = worst.max(f.knot_values().iter().fold(0.0, |m, u| m.max((u - 1.0).abs())));
        }
    }
    verdict(worst <= 1e-10, format!("max |U - 1| after 1000 steps {worst:.2e}"))
}

/// Dirichlet data hold at every step of an Example 1 run.
pub fn boundary_exactness() -> Check {
    let p = example1(1.0, 1.0, 2).unwrap();
    let mesh = p.mesh(20).unwrap();
    let mut f = fit_initial(&mesh, -0.3, &p.initial).unwrap();
    let params = p.step_params(1e-3).unwrap();
    let mut stepper = CrankNicolson::new(params, 20).unwrap();
    let mut worst = 0.0f64;
    for s in 1..=500 {
        let (l, r) = (p.bc)(s as f64 * 1e-3);
        f = stepper.step(&f, l, r).unwrap();
        worst = worst.max((f.value_at_knot(0).unwrap() - l).abs()).max((f.value_at_knot(20).unwrap() - r).abs());
    }
    verdict(worst <= 1e-11, format!("max boundary defect {worst:.2e} over 500 steps"))
}

fn cox_de_boor(knots: &[f64], j: usize, k: usize, x: f64) -> f64 {
    if k == 0 {
        return if knots[j] <= x && x < knots[j + 1] { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    let d1 = knots[j + k] - knots[j];
    if d1 > 0.0 {
        v += (x - knots[j]) / d1 * cox_de_boor(knots, j, k - 1, x);
    }
    let d2 = knots[j + k + 1] - knots[j + 1];
    if d2 > 0.0 {
        v += (knots[j + k + 1] - x) / d2 * cox_de_boor(knots, j + 1, k - 1, x);
    }
    v
}

const LAMBDAS: [f64; 6] = [-10.0, -1.0, 0.0, 0.5, 1.0, 10.0];

/// Basis sums to one at 1000 random points for each of six lambdas.
pub fn basis_partition_of_unity() -> Check {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(1001);
    let h = 0.1;
    let mut worst = 0.0f64;
    for &l in &LAMBDAS {
        let b = Basis64::new(l, h).unwrap();
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(0.0..1.0);
            let j = (x / h).floor() as isize;
            let s: f64 = (j - 2..=j + 3).map(|i| b.eval(i, x, 0.0).unwrap()).sum();
            worst = worst.max((s - 1.0).abs());
        }
    }
    verdict(worst <= 1e-12, format!("max |sum - 1| = {worst:.2e}"))
}

/// Value, first and second derivative agree across every junction.
pub fn basis_c2_junctions() -> Check {
    let h = 0.5;
    let mut worst = 0.0f64;
    for &l in &LAMBDAS {
        let b = Basis64::new(l, h).unwrap();
        for k in -2..=2 {
            let x = k as f64 * h;
            let eps = 1e-9 * h;
            let pairs = [
                (b.eval(0, x - eps, 0.0).unwrap(), b.eval(0, x + eps, 0.0).unwrap(), 1.0),
                (b.eval_d1(0, x - eps, 0.0).unwrap(), b.eval_d1(0, x + eps, 0.0).unwrap(), 1.0 / h),
                (b.eval_d2(0, x - eps, 0.0).unwrap(), b.eval_d2(0, x + eps, 0.0).unwrap(), 1.0 / (h * h)),
            ];
            for (lo, hi, scale) in pairs {
                worst = worst.max((lo - hi).abs() / (scale * (1.0 + l.abs())));
            }
        }
    }
    verdict(worst <= 1e-6, format!("max scaled jump {worst:.2e}"))
}

/// `lambda = 0` against Cox-de Boor cubic B-splines.
pub fn basis_matches_classical_cubic() -> Check {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(1002);
    let h = 0.125;
    let b = Basis64::new(0.0, h).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(-0.3..1.3);
        let i: isize = rng.gen_range(-1..=9);
        let knots: Vec<f64> = (-2..=2).map(|k| (i + k) as f64 * h).collect();
        worst = worst.max((b.eval(i, x, 0.0).unwrap() - cox_de_boor(&knots, 0, 3, x)).abs());
    }
    verdict(worst <= 1e-12, format!("max deviation {worst:.2e}"))
}

/// Analytic derivatives against central differences, relative 1e-5.
pub fn basis_derivatives_match_fd() -> Check {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(1003);
    let h = 0.2;
    let mut worst = 0.0f64;
    for &l in &LAMBDAS {
        let b = Basis64::new(l, h).unwrap();
        let mut n = 0;
        while n < 200 {
            let s: f64 = rng.gen_range(-1.98..1.98);
            if (s - s.round()).abs() < 1e-3 {
                continue;
            }
            n += 1;
            let (x, k) = (s * h, 1e-6 * h);
            let fd1 = (b.eval(0, x + k, 0.0).unwrap() - b.eval(0, x - k, 0.0).unwrap()) / (2.0 * k);
            let fd2 = (b.eval_d1(0, x + k, 0.0).unwrap() - b.eval_d1(0, x - k, 0.0).unwrap()) / (2.0 * k);
            let d1 = b.eval_d1(0, x, 0.0).unwrap();
            let d2 = b.eval_d2(0, x, 0.0).unwrap();
            worst = worst.max((fd1 - d1).abs() / d1.abs().max(1.0 / h));
            worst = worst.max((fd2 - d2).abs() / d2.abs().max(1.0 / (h * h)));
        }
    }
    verdict(worst <= 1e-5, format!("max relative deviation {worst:.2e}"))
}

/// Thomas against partial-pivoting elimination on 200 random diagonally
/// dominant systems.
pub fn thomas_matches_dense() -> Check {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(1004);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = rng.gen_range(3..=64);
        let lower: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let upper: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let main: Vec<f64> = (0..m)
            .map(|i| {
                let off = if i > 0 { lower[i - 1].abs() } else { 0.0 } + if i + 1 < m { upper[i].abs() } else { 0.0 };
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * (off + rng.gen_range(0.1..2.0))
            })
            .collect();
        let rhs: Vec<f64> = (0..m).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let sys = Tridiag64::new(lower, main, upper, rhs).unwrap();
        let xt = sys.solve_thomas().unwrap();
        let xd = sys.solve_dense_oracle().unwrap();
        let scale = xd.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        worst = worst.max(max_diff(&xt, &xd) / scale);
    }
    verdict(worst <= 1e-11, format!("max relative deviation {worst:.2e}"))
}

/// `s(z + d) - s(z)` for `s = 1/2 + 1/2 tanh z`, free of cancellation.
fn s_step(z: f64, d: f64) -> f64 {
    let (tz, td) = (z.tanh(), d.tanh());
    0.5 * td * (1.0 - tz * tz) / (1.0 + tz * td)
}

fn u_step(z: f64, d: f64, q: u32) -> f64 {
    let s = 0.5 + 0.5 * z.tanh();
    let qf = q as f64;
    s.powf(1.0 / qf) * ((s_step(z, d) / s).ln_1p() / qf).exp_m1()
}

/// Example 1 exact solution satisfies the equation with `mu = 1`.
pub fn example1_residual() -> Check {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(1005);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for &(alpha, eta, q) in &[(0.1, -0.0025, 1u32), (1.0, 1.0, 1), (1.0, 1.0, 2), (0.01, 1.0, 1), (0.1, -0.0025, 4)] {
        let p = example1(alpha, eta, q).unwrap();
        let u = p.exact.clone().unwrap();
        let c = wave_speed(alpha, eta, q).unwrap();
        let k = -alpha * q as f64 / (2.0 * (q as f64 + 1.0));
        for _ in 0..200 {
            let x: f64 = rng.gen_range(0.0..1.0);
            let t: f64 = rng.gen_range(0.0..1.0);
            let z = k * (x - c * t);
            let v = u(x, t);
            let ut = (u_step(z, -k * c * h, q) - u_step(z, k * c * h, q)) / (2.0 * h);
            let ux = (u_step(z, k * h, q) - u_step(z, -k * h, q)) / (2.0 * h);
            let uxx = (u_step(z, k * h, q) + u_step(z, -k * h, q)) / (h * h);
            let vq = v.powi(q as i32);
            worst = worst.max((ut + alpha * vq * ux - p.mu * uxx - eta * v * (1.0 - vq)).abs());
        }
    }
    verdict(worst <= 1e-6, format!("max residual {worst:.2e} over 1000 points"))
}
