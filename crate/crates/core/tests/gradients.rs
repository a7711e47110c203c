//! Analytic gradients against central finite differences.

use hitviz_core::nn::ctn::{self, CtnArch};
use hitviz_core::nn::layers::{self, ConvShape};
use hitviz_core::nn::Tensor4;
use hitviz_core::rng;
use rand::Rng;

const EPS: f64 = 1e-4;
const INSTANCES: u64 = 20;

/// `|a - n| / max(|a|, |n|, 1e-6)`; the floor keeps gradients that are zero
/// up to roundoff from dominating the ratio.
fn rel_err(a: f64, n: f64) -> f64 {
    (a - n).abs() / a.abs().max(n.abs()).max(1e-6)
}

fn max_rel_err(analytic: &[f64], numeric: &[f64]) -> f64 {
    assert_eq!(analytic.len(), numeric.len());
    analytic
        .iter()
        .zip(numeric)
        .map(|(&a, &n)| rel_err(a, n))
        .fold(0.0, f64::max)
}

/// Central differences of `f` with respect to every element of `x`.
fn numeric_grad(x: &[f64], eps: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = probe[i];
            probe[i] = orig + eps;
            let up = f(&probe);
            probe[i] = orig - eps;
            let down = f(&probe);
            probe[i] = orig;
            (up - down) / (2.0 * eps)
        })
        .collect()
}

fn random_vec(r: &mut rng::Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.random_range(-1.0..1.0)).collect()
}

/// Projects an output onto fixed random weights to get a scalar loss.
fn project(y: &[f64], c: &[f64]) -> f64 {
    y.iter().zip(c).map(|(a, b)| a * b).sum()
}

#[test]
fn conv2d_gradients() {
    let s = ConvShape {
        in_c: 2,
        out_c: 3,
        k: 3,
        pad: 1,
    };
    let mut worst: f64 = 0.0;
    for seed in 0..INSTANCES {
        let mut r = rng::seeded(seed);
        let x = Tensor4::from_vec(2, 2, 5, 4, random_vec(&mut r, 2 * 2 * 5 * 4)).unwrap();
        let k = random_vec(&mut r, s.kernel_len());
        let b = random_vec(&mut r, 3);
        let c = random_vec(&mut r, 2 * 3 * 5 * 4);
        let dout = Tensor4::from_vec(2, 3, 5, 4, c.clone()).unwrap();
        let g = layers::conv2d_backward(&x, &k, s, &dout).unwrap();

        let loss = |x: &Tensor4, k: &[f64], b: &[f64]| {
            project(&layers::conv2d_forward(x, k, b, s).unwrap().data, &c)
        };
        let nx = numeric_grad(&x.data, EPS, |d| {
            loss(&Tensor4::from_vec(2, 2, 5, 4, d.to_vec()).unwrap(), &k, &b)
        });
        let nk = numeric_grad(&k, EPS, |d| loss(&x, d, &b));
        let nb = numeric_grad(&b, EPS, |d| loss(&x, &k, d));
        worst = worst
            .max(max_rel_err(&g.input.data, &nx))
            .max(max_rel_err(&g.kernels, &nk))
            .max(max_rel_err(&g.bias, &nb));
    }
    assert!(worst < 1e-4, "conv2d max relative error {worst:e}");
}

#[test]
fn maxpool_gradients() {
    let mut worst: f64 = 0.0;
    for seed in 0..INSTANCES {
        let mut r = rng::seeded(100 + seed);
        // distinct values at least 0.01 apart so no window has a near tie
        let mut vals: Vec<f64> = (0..64).map(|i| i as f64 * 0.01).collect();
        for i in (1..vals.len()).rev() {
            vals.swap(i, r.random_range(0..=i));
        }
        let x = Tensor4::from_vec(1, 1, 8, 8, vals).unwrap();
        let c = random_vec(&mut r, 16);
        let (_, idx) = layers::maxpool2_forward(&x).unwrap();
        let g = layers::maxpool2_backward(
            x.shape(),
            &idx,
            &Tensor4::from_vec(1, 1, 4, 4, c.clone()).unwrap(),
        )
        .unwrap();
        let n = numeric_grad(&x.data, EPS, |d| {
            let t = Tensor4::from_vec(1, 1, 8, 8, d.to_vec()).unwrap();
            project(&layers::maxpool2_forward(&t).unwrap().0.data, &c)
        });
        worst = worst.max(max_rel_err(&g.data, &n));
    }
    assert!(worst < 1e-4, "maxpool max relative error {worst:e}");
}

#[test]
fn relu_gradients() {
    let mut worst: f64 = 0.0;
    for seed in 0..INSTANCES {
        let mut r = rng::seeded(200 + seed);
        // keep inputs away from the kink at 0
        let vals: Vec<f64> = random_vec(&mut r, 30)
            .into_iter()
            .map(|v| if v.abs() < 0.01 { 0.5 } else { v })
            .collect();
        let x = Tensor4::from_vec(1, 3, 2, 5, vals).unwrap();
        let c = random_vec(&mut r, 30);
        let g = layers::relu_backward(&x, &Tensor4::from_vec(1, 3, 2, 5, c.clone()).unwrap());
        let n = numeric_grad(&x.data, EPS, |d| {
            let t = Tensor4::from_vec(1, 3, 2, 5, d.to_vec()).unwrap();
            project(&layers::relu_forward(&t).data, &c)
        });
        worst = worst.max(max_rel_err(&g.data, &n));
    }
    assert!(worst < 1e-4, "relu max relative error {worst:e}");
}

#[test]
fn dense_and_softmax_gradients() {
    let mut worst: f64 = 0.0;
    for seed in 0..INSTANCES {
        let mut r = rng::seeded(300 + seed);
        let x = random_vec(&mut r, 10);
        let w = random_vec(&mut r, 20);
        let b = random_vec(&mut r, 2);
        let label = (seed % 2) as usize;
        let loss = |x: &[f64], w: &[f64], b: &[f64]| {
            let z = layers::dense_forward(x, w, b).unwrap();
            layers::softmax_xent(&z, label).unwrap().0
        };
        let z = layers::dense_forward(&x, &w, &b).unwrap();
        let (_, dz) = layers::softmax_xent(&z, label).unwrap();
        let (mut dw, mut db) = (vec![0.0; 20], vec![0.0; 2]);
        let dx = layers::dense_backward(&x, &w, &dz, &mut dw, &mut db).unwrap();

        worst = worst
            .max(max_rel_err(
                &dx,
                &numeric_grad(&x, EPS, |d| loss(d, &w, &b)),
            ))
            .max(max_rel_err(
                &dw,
                &numeric_grad(&w, EPS, |d| loss(&x, d, &b)),
            ))
            .max(max_rel_err(
                &db,
                &numeric_grad(&b, EPS, |d| loss(&x, &w, d)),
            ));
    }
    assert!(worst < 1e-5, "dense max relative error {worst:e}");
}

#[test]
fn reduced_ctn_gradients() {
    let arch = CtnArch {
        in_channels: 3,
        side: 8,
        kernel: 3,
        widths: [2, 3, 4],
        classes: 2,
    };
    let mut worst: f64 = 0.0;
    for seed in 0..INSTANCES {
        let mut r = rng::seeded(400 + seed);
        let params = random_vec(&mut r, arch.param_count());
        let batch = Tensor4::from_vec(2, 3, 8, 8, random_vec(&mut r, 2 * 3 * 64)).unwrap();
        let labels = [0, 1];
        let lg = ctn::loss_and_grad(&arch, &params, &batch, &labels).unwrap();
        let n = numeric_grad(&params, EPS, |p| {
            ctn::loss_and_grad(&arch, p, &batch, &labels).unwrap().loss
        });
        worst = worst.max(max_rel_err(&lg.grad, &n));
    }
    assert!(worst < 1e-3, "stacked CTN max relative error {worst:e}");
}
