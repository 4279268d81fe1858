use sgb_core::sim::em::linear_sde;
use sgb_core::sim::*;
use sgb_core::{PExponent, RngStream};

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

#[test]
fn em_linear_mean_within_three_se() {
    let spec = linear_sde(1.0, 0.5, 1.0).unwrap();
    let xs = par_samples(100_000, RngStream::new(21, 0), |s| euler_maruyama(&spec, 1.0, 1e-3, s).unwrap().x_end());
    let (m, se) = mean_se(&xs);
    // EM bias is about e dt / 2 = 1.4e-3, below the 3 SE band
    assert!((m - 1f64.exp()).abs() < 3.0 * se, "{m} ± {se}");
}

#[test]
fn em_weak_order_one() {
    let (mu, sigma) = (1.0, 0.5);
    let spec = linear_sde(mu, sigma, 1.0).unwrap();
    let fine = 1000usize;
    // errors against the exact solution driven by the same Brownian path,
    // with dt = 4e-3, 2e-3, 1e-3 sharing increments
    let diffs = par_samples(100_000, RngStream::new(22, 0), |s| {
        let mut r = s.rng();
        let dw: Vec<f64> = (0..fine).map(|_| (1.0 / fine as f64).sqrt() * sgb_core::rng::standard_normal(&mut r)).collect();
        let w_t: f64 = dw.iter().sum();
        let exact = ((mu - 0.5 * sigma * sigma) + sigma * w_t).exp();
        let mut out = [0.0; 3];
        for (slot, coarsen) in [4usize, 2, 1].into_iter().enumerate() {
            let mut k = 0;
            let mut noise = |buf: &mut [f64]| {
                buf[0] = dw[k * coarsen..(k + 1) * coarsen].iter().sum();
                k += 1;
            };
            let dt = coarsen as f64 / fine as f64;
            let path = euler_maruyama_driven(&spec, 1.0, dt, &mut noise, None).unwrap();
            out[slot] = path.x_end() - exact;
        }
        out
    });
    let errs: Vec<(f64, f64)> = (0..3).map(|j| mean_se(&diffs.iter().map(|d| d[j]).collect::<Vec<_>>())).collect();
    for w in errs.windows(2) {
        let ratio = w[1].0 / w[0].0;
        assert!((ratio - 0.5).abs() <= 0.15, "errors {errs:?}, ratio {ratio}");
    }
}

#[test]
fn exp_clock_exponential_moment_of_a() {
    let p = PExponent::new(0.5).unwrap();
    for t in [0.5, 2.0, 8.0] {
        for q in [0.1, 0.5, 1.0] {
            let ys = par_samples(20_000, RngStream::new(23, 0), |s| (q * exp_clock_terminal(p, t, &mut s.rng()).1).exp());
            let (m, _) = mean_se(&ys);
            assert!(m <= (q / 0.5f64).exp() + 1e-12);
        }
    }
    let path = simulate_exp_clock_process(p, 1.0, 4, &mut RngStream::new(1, 1).rng()).unwrap();
    assert_eq!(path.x[0], 1.0);
}

#[test]
fn sqrt_shift_base_moment() {
    let bp = BlockParams::new(0.5, 0.5, 0).unwrap();
    let p = 0.3;
    let ys = par_samples(200_000, RngStream::new(24, 0), |s| (simulate_sqrt_shift_process(&bp, &mut s.rng()) - 1.0).powf(p));
    let (m, se) = mean_se(&ys);
    assert!((m - 1.0 / (1.0 - p)).abs() < 4.0 * se, "{m} ± {se}");
}

#[test]
fn sqrt_shift_weak_l1_grows() {
    // u P[sup Y^2 > u] does not decay: the Pareto tail keeps it near 1
    let bp = BlockParams::new(0.5, 0.5, 2).unwrap();
    let n = 400_000;
    let ys = par_samples(n, RngStream::new(25, 0), |s| simulate_sqrt_shift_process(&bp, &mut s.rng()));
    for u in [10.0, 100.0, 1000.0] {
        let frac = ys.iter().filter(|&&y| y > u).count() as f64 / n as f64;
        assert!(u * frac > 0.8, "u = {u}: {}", u * frac);
    }
}

#[test]
fn alpha_ratio_approaches_constant() {
    let p = PExponent::new(0.5).unwrap();
    let n = 60;
    let samples = par_samples(400_000, RngStream::new(26, 0), |s| simulate_alpha_sharpness_weighted(n, p, &mut s.rng()).unwrap());
    let x: Vec<f64> = samples.iter().map(|s| (0.5 * s.ln_sup_x + s.ln_weight).exp()).collect();
    let h: Vec<f64> = samples.iter().map(|s| (0.5 * s.ln_sup_h + s.ln_weight).exp()).collect();
    let (mx, _) = mean_se(&x);
    let (mh, _) = mean_se(&h);
    let ratio = (mx / mh).powi(2);
    assert!(ratio > 7.0 && ratio < 8.2, "{ratio}");
}
