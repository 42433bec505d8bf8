mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robnet::tensor::{pyramid_width, Tape, Tensor};

use common::*;

const EPS: f64 = 1e-3;
const TOL: f64 = 1e-3;

#[test]
fn conv_forward_matches_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..30 {
        let (b, cin, cout) = (rng.random_range(1..3), rng.random_range(1..4), rng.random_range(1..4));
        let k = [1, 3, 5][rng.random_range(0..3)];
        let pad = rng.random_range(0..=k / 2);
        let h = rng.random_range(k..k + 6);
        let w = rng.random_range(k..k + 6);
        let x = weights(&mut rng, b * cin * h * w);
        let kern = weights(&mut rng, cout * cin * k * k);
        let bias = weights(&mut rng, cout);
        let mut t = Tape::new();
        let xv = t.constant(tensor(&[b, cin, h, w], &x));
        let kv = t.constant(tensor(&[cout, cin, k, k], &kern));
        let bv = t.constant(tensor(&[cout], &bias));
        let y = t.conv2d(xv, kv, bv, pad).unwrap();
        let expect = conv_oracle(&x, [b, cin, h, w], &kern, cout, k, &bias, pad);
        let got = to_f64(t.value(y).data());
        assert_eq!(got.len(), expect.len());
        for (a, e) in got.iter().zip(&expect) {
            assert!((a - e).abs() < 1e-4, "{a} vs {e}");
        }
    }
}

#[test]
fn pooling_and_dense_forward_match_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let (c, h, w) = (rng.random_range(1..4), rng.random_range(2..12), rng.random_range(2..12));
        let x = weights(&mut rng, c * h * w);
        let mut t = Tape::new();
        let xv = t.constant(tensor(&[1, c, h, w], &x));
        let p = t.maxpool2d(xv).unwrap();
        assert_eq!(to_f64(t.value(p).data()), maxpool_oracle(&x, c, h, w));
        let s = t.spp(xv, &[1, 2, 4]).unwrap();
        assert_eq!(to_f64(t.value(s).data()), spp_oracle(&x, c, h, w, &[1, 2, 4]));

        let (b, f, g) = (rng.random_range(1..3), rng.random_range(1..20), rng.random_range(1..20));
        let (xd, wd, bd) = (weights(&mut rng, b * f), weights(&mut rng, f * g), weights(&mut rng, g));
        let xv = t.constant(tensor(&[b, f], &xd));
        let wv = t.constant(tensor(&[f, g], &wd));
        let bv = t.constant(tensor(&[g], &bd));
        let y = t.dense(xv, wv, bv).unwrap();
        for (a, e) in to_f64(t.value(y).data()).iter().zip(dense_oracle(&xd, b, f, &wd, g, &bd)) {
            assert!((a - e).abs() < 1e-5);
        }
    }
}

#[test]
fn spp_small_sizes_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for h in 1..=24 {
        for w in 1..=24 {
            let x = weights(&mut rng, 2 * h * w);
            let mut t = Tape::new();
            let xv = t.constant(tensor(&[1, 2, h, w], &x));
            let s = t.spp(xv, &[1, 2, 4]).unwrap();
            assert_eq!(t.value(s).shape(), &[1, pyramid_width(&[1, 2, 4], 2)]);
            assert_eq!(to_f64(t.value(s).data()), spp_oracle(&x, 2, h, w, &[1, 2, 4]));
        }
    }
}

#[test]
fn gradient_conv2d() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let (b, cin, cout) = (rng.random_range(1..3), rng.random_range(1..3), rng.random_range(1..3));
        let k = [1, 3, 5][rng.random_range(0..3)];
        let pad = rng.random_range(0..=k / 2);
        let (h, w) = (rng.random_range(k..k + 4), rng.random_range(k..k + 4));
        let c = GradCheck {
            shapes: vec![vec![b, cin, h, w], vec![cout, cin, k, k], vec![cout]],
            inputs: vec![
                weights(&mut rng, b * cin * h * w),
                weights(&mut rng, cout * cin * k * k),
                weights(&mut rng, cout),
            ],
        };
        let err = c.run(
            &mut rng,
            EPS,
            |t, v| t.conv2d(v[0], v[1], v[2], pad).unwrap(),
            |x| conv_oracle(&x[0], [b, cin, h, w], &x[1], cout, k, &x[2], pad),
        );
        assert!(err < TOL, "conv2d relative error {err}");
    }
}

#[test]
fn gradient_maxpool_and_spp() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (c, h, w) = (rng.random_range(1..3), rng.random_range(2..9), rng.random_range(2..9));
        let x = distinct_values(&mut rng, c * h * w, 2e-2);
        let pool = GradCheck {
            shapes: vec![vec![1, c, h, w]],
            inputs: vec![x.clone()],
        };
        let err = pool.run(
            &mut rng,
            EPS,
            |t, v| t.maxpool2d(v[0]).unwrap(),
            |x| maxpool_oracle(&x[0], c, h, w),
        );
        assert!(err < TOL, "maxpool relative error {err}");
        let err = pool.run(
            &mut rng,
            EPS,
            |t, v| t.spp(v[0], &[1, 2, 4]).unwrap(),
            |x| spp_oracle(&x[0], c, h, w, &[1, 2, 4]),
        );
        assert!(err < TOL, "spp relative error {err}");
        let bins = rng.random_range(1..5);
        let err = pool.run(
            &mut rng,
            EPS,
            |t, v| t.adaptive_max_pool(v[0], bins).unwrap(),
            |x| spp_oracle(&x[0], c, h, w, &[bins]),
        );
        assert!(err < TOL, "adaptive pool relative error {err}");
    }
}

#[test]
fn gradient_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let (b, f, g) = (rng.random_range(1..4), rng.random_range(1..12), rng.random_range(1..12));
        let c = GradCheck {
            shapes: vec![vec![b, f], vec![f, g], vec![g]],
            inputs: vec![weights(&mut rng, b * f), weights(&mut rng, f * g), weights(&mut rng, g)],
        };
        let err = c.run(
            &mut rng,
            EPS,
            |t, v| t.dense(v[0], v[1], v[2]).unwrap(),
            |x| dense_oracle(&x[0], b, f, &x[1], g, &x[2]),
        );
        assert!(err < TOL, "dense relative error {err}");
    }
}

#[test]
fn gradient_activations_and_losses() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let len = rng.random_range(1..40);
        let relu_in = values_away_from(&mut rng, len, &[0.0], 1e-2);
        let c = GradCheck {
            shapes: vec![vec![len]],
            inputs: vec![relu_in],
        };
        let err = c.run(&mut rng, EPS, |t, v| t.relu(v[0]), |x| x[0].iter().map(|v| v.max(0.0)).collect());
        assert!(err < TOL, "relu relative error {err}");

        // spread over [-4, 4] so both clamps and the slope are exercised
        let hs_in: Vec<f64> = values_away_from(&mut rng, len, &[-0.625, 0.625], 2.5e-3)
            .into_iter()
            .map(|v| f64::from((4.0 * v) as f32))
            .collect();
        let c = GradCheck {
            shapes: vec![vec![len]],
            inputs: vec![hs_in],
        };
        let err = c.run(
            &mut rng,
            EPS,
            |t, v| t.hard_sigmoid(v[0]),
            |x| x[0].iter().map(|v| (0.2 * v + 0.5).clamp(0.0, 1.0)).collect(),
        );
        assert!(err < TOL, "hard sigmoid relative error {err}");

        let c = GradCheck {
            shapes: vec![vec![1, len], vec![1, len]],
            inputs: vec![weights(&mut rng, len), weights(&mut rng, len)],
        };
        let err = c.run(
            &mut rng,
            EPS,
            |t, v| t.mse_loss(v[0], v[1]).unwrap(),
            |x| {
                let s: f64 = x[0].iter().zip(&x[1]).map(|(a, b)| (a - b) * (a - b)).sum();
                vec![s / len as f64]
            },
        );
        assert!(err < TOL, "mse relative error {err}");

        let c = GradCheck {
            shapes: vec![vec![len]],
            inputs: vec![weights(&mut rng, len)],
        };
        let err = c.run(&mut rng, EPS, |t, v| t.sum(v[0]), |x| vec![x[0].iter().sum()]);
        assert!(err < TOL, "sum relative error {err}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spp_width_is_size_independent(h in 1usize..40, w in 1usize..40, c in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = weights(&mut rng, c * h * w);
        let mut t = Tape::new();
        let xv = t.constant(tensor(&[1, c, h, w], &x));
        let s = t.spp(xv, &[1, 2, 4]).unwrap();
        prop_assert_eq!(t.value(s).len(), 21 * c);
        // the 1×1 level is the global max of each channel
        for ch in 0..c {
            let m = x[ch * h * w..(ch + 1) * h * w].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert_eq!(f64::from(t.value(s).data()[ch]), m);
        }
    }

    #[test]
    fn backward_twice_is_rejected(len in 1usize..10) {
        let mut t = Tape::new();
        let x = t.param(Tensor::full(&[len], 0.5));
        let s = t.sum(x);
        t.backward(s).unwrap();
        prop_assert!(t.backward(s).is_err());
    }
}
