//! Acceptance suite. Runs every criterion in order and prints one
//! PASS/FAIL line each; exits nonzero if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hitviz::corpus::{gen_synthetic_corpus, SyntheticCorpusSpec};
use hitviz::experiment::{mean_viz, run_comparison, ExperimentConfig, Feature};
use hitviz::model_io::{load_model, save_model};
use hitviz::png_io::encode_png;
use hitviz_core::baselines::{self, FeatureRow, FeatureSet, SvmHyper};
use hitviz_core::colorize::{self, build_partition_table, Cut, Scheme};
use hitviz_core::dataset::Label;
use hitviz_core::entropy::{self, CountLogTable, EntropyParams, WindowHistogram};
use hitviz_core::hilbert;
use hitviz_core::imaging::ImageTensor;
use hitviz_core::nn::ctn::{self, CtnArch, CtnModel};
use hitviz_core::nn::layers::{self, ConvShape};
use hitviz_core::nn::{evaluate, train_ctn, Sample, Tensor4, TrainConfig};
use hitviz_core::rng::{self, Rng};
use rand::{Rng as _, RngCore};
use zune_png::zune_core::bytestream::ZCursor;
use zune_png::PngDecoder;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

/// A random stream mixing uniform noise, small alphabets and constant runs.
fn mixed_stream(r: &mut Rng, len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let seg = r.random_range(1..2048).min(len - out.len());
        match r.random_range(0..3) {
            0 => out.extend((0..seg).map(|_| r.random::<u8>())),
            1 => {
                let alphabet = r.random_range(2..20u8);
                out.extend((0..seg).map(|_| r.random_range(0..alphabet)));
            }
            _ => out.extend(std::iter::repeat_n(r.random::<u8>(), seg)),
        }
    }
    out
}

fn c1_entropy_oracle() -> Outcome {
    let mut r = rng::seeded(1);
    let streams: Vec<(Vec<u8>, usize)> = (0..100)
        .map(|i| {
            let len = r.random_range(1..=65536);
            (mixed_stream(&mut r, len), [64, 64, 256, 16][i % 4])
        })
        .collect();
    let start = Instant::now();
    let profiles: Vec<_> = streams
        .iter()
        .map(|(s, w)| entropy::entropy_profile(s, EntropyParams::sliding(*w, 1).unwrap()).unwrap())
        .collect();
    let elapsed = start.elapsed();
    let mut max_float_gap: f64 = 0.0;
    let mut positions = 0usize;
    for ((s, w), p) in streams.iter().zip(&profiles) {
        let n = s.len();
        let table = CountLogTable::new((*w).min(n));
        for i in 0..n {
            let (lo, hi) = entropy::window_bounds(i, *w, n);
            let naive = WindowHistogram::from_slice(&table, &s[lo..hi]).entropy_bits() / 8.0;
            ensure(p.values[i] == naive, || {
                format!(
                    "stream len {n} window {w} pos {i}: incremental {} naive {naive}",
                    p.values[i]
                )
            })?;
            if i % 97 == 0 {
                let float = entropy::shannon_entropy(&s[lo..hi]).unwrap() / 8.0;
                max_float_gap = max_float_gap.max((float - naive).abs());
            }
        }
        positions += n;
    }
    ensure(max_float_gap < 1e-9, || {
        format!("fixed-point vs float gap {max_float_gap:e}")
    })?;
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!(
        "{positions} positions identical, incremental {elapsed:.2?}"
    ))
}

fn c2_entropy_bounds() -> Outcome {
    let constant = entropy::shannon_entropy(&[0x5A; 256]).unwrap() / 8.0;
    let all: Vec<u8> = (0..=255).collect();
    let uniform = entropy::shannon_entropy(&all).unwrap() / 8.0;
    let two: Vec<u8> = (0..256)
        .map(|i| if i % 2 == 0 { 0x00 } else { 0xFF })
        .collect();
    let binary = entropy::shannon_entropy(&two).unwrap() / 8.0;
    ensure((constant, uniform, binary) == (0.0, 1.0, 0.125), || {
        format!("got {constant}, {uniform}, {binary}")
    })?;
    let block = |b: &[u8]| {
        entropy::entropy_profile(b, EntropyParams::block(256).unwrap())
            .unwrap()
            .values
    };
    ensure(block(&[0x5A; 256]).iter().all(|&v| v == 0.0), || {
        "block profile of constant".into()
    })?;
    ensure(block(&all).iter().all(|&v| v == 1.0), || {
        "block profile of uniform".into()
    })?;
    ensure(block(&two).iter().all(|&v| v == 0.125), || {
        "block profile of two symbols".into()
    })?;
    Ok("0.0 / 1.0 / 0.125".into())
}

fn c3_hilbert() -> Outcome {
    let start = Instant::now();
    for k in 1..=6u32 {
        let n = 1u64 << k;
        let mut seen = vec![false; (n * n) as usize];
        let mut prev: Option<(u32, u32)> = None;
        for d in 0..n * n {
            let (x, y) = hilbert::d2xy(k, d).map_err(|e| e.to_string())?;
            ensure(u64::from(x) < n && u64::from(y) < n, || {
                format!("k={k} d={d} out of grid")
            })?;
            let cell = &mut seen[(u64::from(y) * n + u64::from(x)) as usize];
            ensure(!*cell, || format!("k={k} d={d} revisits ({x},{y})"))?;
            *cell = true;
            ensure(
                hilbert::xy2d(k, x, y).map_err(|e| e.to_string())? == d,
                || format!("k={k} d={d} round trip"),
            )?;
            if let Some((px, py)) = prev {
                ensure(px.abs_diff(x) + py.abs_diff(y) == 1, || {
                    format!("k={k} d={d} not adjacent")
                })?;
            }
            prev = Some((x, y));
        }
    }
    for k in 1..=3u32 {
        let n = 1u64 << k;
        let mut seen = vec![false; (n * n * n) as usize];
        let mut prev: Option<(u32, u32, u32)> = None;
        for d in 0..n * n * n {
            let (x, y, z) = hilbert::hilbert3d_point(k, d).map_err(|e| e.to_string())?;
            ensure([x, y, z].iter().all(|&c| u64::from(c) < n), || {
                format!("3d k={k} d={d} out of cube")
            })?;
            let cell = &mut seen[((u64::from(z) * n + u64::from(y)) * n + u64::from(x)) as usize];
            ensure(!*cell, || format!("3d k={k} d={d} revisits"))?;
            *cell = true;
            if let Some((px, py, pz)) = prev {
                let step = px.abs_diff(x) + py.abs_diff(y) + pz.abs_diff(z);
                ensure(step == 1, || format!("3d k={k} d={d} step {step}"))?;
            }
            prev = Some((x, y, z));
        }
    }
    let mut colors: Vec<_> = (0..=255u8)
        .map(|v| hilbert::byte_to_rgb_hilbert(v).channels())
        .collect();
    colors.sort_unstable();
    colors.dedup();
    ensure(colors.len() == 256, || {
        format!("{} distinct colors", colors.len())
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(2))?;
    Ok(format!("2D k<=6, 3D k<=3, 256 colors, {elapsed:.2?}"))
}

fn c4_hit_entropy_identity() -> Outcome {
    let mut r = rng::seeded(4);
    for i in 0..50 {
        let len = r.random_range(1..20000);
        let s = mixed_stream(&mut r, len);
        let params = EntropyParams::sliding([64, 32, 256][i % 3], 1 + i % 4).unwrap();
        let profile = entropy::entropy_profile(&s, params).unwrap();
        let cut = Cut::ALL[i % 3];
        let hit =
            colorize::encode(&s, Scheme::hit(cut), Some(&profile)).map_err(|e| e.to_string())?;
        let ent =
            colorize::encode(&s, Scheme::Entropy, Some(&profile)).map_err(|e| e.to_string())?;
        ensure(hit.pixels.len() == ent.pixels.len(), || {
            "length differs".into()
        })?;
        for (j, (h, e)) in hit.pixels.iter().zip(&ent.pixels).enumerate() {
            ensure((h.r, 0, h.b) == (e.r, e.g, e.b), || {
                format!("stream {i} pixel {j}: {h:?} vs {e:?}")
            })?;
        }
    }
    Ok("50 streams identical".into())
}

fn c5_partition_table() -> Outcome {
    let t = build_partition_table(8).map_err(|e| e.to_string())?;
    let check =
        |bytes: &mut dyn Iterator<Item = u8>, level: u8, what: &str| -> Result<(), String> {
            for b in bytes {
                ensure(t.green_level[b as usize] == level, || {
                    format!(
                        "{what} byte {b:#04x} -> {} not {level}",
                        t.green_level[b as usize]
                    )
                })?;
            }
            Ok(())
        };
    check(&mut std::iter::once(0), 0, "zero")?;
    check(&mut std::iter::once(255), 255, "0xFF")?;
    check(&mut (b'a'..=b'w'), 126, "lowercase")?;
    check(&mut (b'A'..=b'W'), 64, "uppercase")?;
    check(&mut (b'0'..=b'9'), 32, "digit")?;
    check(
        &mut (0x20..=0x7Eu8).filter(|b| !b.is_ascii_alphanumeric()),
        16,
        "special",
    )?;
    let counts: Vec<usize> = [4, 8, 16]
        .iter()
        .map(|&c| build_partition_table(c).map(|t| t.distinct_classes()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(counts == [4, 8, 16], || format!("class counts {counts:?}"))?;
    Ok("six rows verbatim, classes 4/8/16".into())
}

const EPS: f64 = 1e-4;

fn rel_err(a: f64, n: f64) -> f64 {
    (a - n).abs() / a.abs().max(n.abs()).max(1e-6)
}

fn max_rel_err(analytic: &[f64], numeric: &[f64]) -> f64 {
    analytic
        .iter()
        .zip(numeric)
        .map(|(&a, &n)| rel_err(a, n))
        .fold(0.0, f64::max)
}

fn numeric_grad(x: &[f64], mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = probe[i];
            probe[i] = orig + EPS;
            let up = f(&probe);
            probe[i] = orig - EPS;
            let down = f(&probe);
            probe[i] = orig;
            (up - down) / (2.0 * EPS)
        })
        .collect()
}

fn random_vec(r: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.random_range(-1.0..1.0)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn c6_gradients() -> Outcome {
    let start = Instant::now();
    let (mut conv, mut pool, mut relu, mut dense, mut stacked) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let s = ConvShape {
        in_c: 2,
        out_c: 3,
        k: 3,
        pad: 1,
    };
    let arch = CtnArch {
        in_channels: 3,
        side: 8,
        kernel: 3,
        widths: [2, 3, 4],
        classes: 2,
    };
    for seed in 0..20u64 {
        let mut r = rng::seeded(1000 + seed);

        let x = Tensor4::from_vec(2, 2, 5, 4, random_vec(&mut r, 80)).unwrap();
        let k = random_vec(&mut r, s.kernel_len());
        let b = random_vec(&mut r, 3);
        let c = random_vec(&mut r, 120);
        let g = layers::conv2d_backward(
            &x,
            &k,
            s,
            &Tensor4::from_vec(2, 3, 5, 4, c.clone()).unwrap(),
        )
        .unwrap();
        let loss = |x: &Tensor4, k: &[f64], b: &[f64]| {
            dot(&layers::conv2d_forward(x, k, b, s).unwrap().data, &c)
        };
        conv = conv
            .max(max_rel_err(
                &g.input.data,
                &numeric_grad(&x.data, |d| {
                    loss(&Tensor4::from_vec(2, 2, 5, 4, d.to_vec()).unwrap(), &k, &b)
                }),
            ))
            .max(max_rel_err(
                &g.kernels,
                &numeric_grad(&k, |d| loss(&x, d, &b)),
            ))
            .max(max_rel_err(&g.bias, &numeric_grad(&b, |d| loss(&x, &k, d))));

        let mut vals: Vec<f64> = (0..64).map(|i| i as f64 * 0.01).collect();
        for i in (1..64).rev() {
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
        pool = pool.max(max_rel_err(
            &g.data,
            &numeric_grad(&x.data, |d| {
                dot(
                    &layers::maxpool2_forward(&Tensor4::from_vec(1, 1, 8, 8, d.to_vec()).unwrap())
                        .unwrap()
                        .0
                        .data,
                    &c,
                )
            }),
        ));

        let vals: Vec<f64> = random_vec(&mut r, 30)
            .into_iter()
            .map(|v| if v.abs() < 0.01 { 0.5 } else { v })
            .collect();
        let x = Tensor4::from_vec(1, 3, 2, 5, vals).unwrap();
        let c = random_vec(&mut r, 30);
        let g = layers::relu_backward(&x, &Tensor4::from_vec(1, 3, 2, 5, c.clone()).unwrap());
        relu = relu.max(max_rel_err(
            &g.data,
            &numeric_grad(&x.data, |d| {
                dot(
                    &layers::relu_forward(&Tensor4::from_vec(1, 3, 2, 5, d.to_vec()).unwrap()).data,
                    &c,
                )
            }),
        ));

        let (x, w, b) = (
            random_vec(&mut r, 10),
            random_vec(&mut r, 20),
            random_vec(&mut r, 2),
        );
        let label = (seed % 2) as usize;
        let loss = |x: &[f64], w: &[f64], b: &[f64]| {
            layers::softmax_xent(&layers::dense_forward(x, w, b).unwrap(), label)
                .unwrap()
                .0
        };
        let (_, dz) =
            layers::softmax_xent(&layers::dense_forward(&x, &w, &b).unwrap(), label).unwrap();
        let (mut dw, mut db) = (vec![0.0; 20], vec![0.0; 2]);
        let dx = layers::dense_backward(&x, &w, &dz, &mut dw, &mut db).unwrap();
        dense = dense
            .max(max_rel_err(&dx, &numeric_grad(&x, |d| loss(d, &w, &b))))
            .max(max_rel_err(&dw, &numeric_grad(&w, |d| loss(&x, d, &b))))
            .max(max_rel_err(&db, &numeric_grad(&b, |d| loss(&x, &w, d))));

        let params = random_vec(&mut r, arch.param_count());
        let batch = Tensor4::from_vec(2, 3, 8, 8, random_vec(&mut r, 384)).unwrap();
        let lg = ctn::loss_and_grad(&arch, &params, &batch, &[0, 1]).unwrap();
        stacked = stacked.max(max_rel_err(
            &lg.grad,
            &numeric_grad(&params, |p| {
                ctn::loss_and_grad(&arch, p, &batch, &[0, 1]).unwrap().loss
            }),
        ));
    }
    let layer_worst = conv.max(pool).max(relu).max(dense);
    let summary = format!(
        "conv {conv:.1e}, pool {pool:.1e}, relu {relu:.1e}, dense {dense:.1e}, ctn {stacked:.1e}"
    );
    ensure(layer_worst < 1e-4 && stacked < 1e-3, || summary.clone())?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(summary)
}

fn toy_set() -> Vec<Sample> {
    let mut r = rng::seeded(11);
    (0..20)
        .map(|i| {
            let label = if i % 2 == 0 {
                Label::Benign
            } else {
                Label::Malicious
            };
            let mut input = Vec::with_capacity(3 * 64 * 64);
            for _ in 0..3 {
                for y in 0..64 {
                    for x in 0..64 {
                        let coord = if label == Label::Benign { y } else { x };
                        let stripe = if (coord / 4) % 2 == 0 { 0.8 } else { 0.2 };
                        input.push((stripe + r.random_range(-0.15..0.15f64)).clamp(0.0, 1.0));
                    }
                }
            }
            Sample { input, label }
        })
        .collect()
}

fn c7_toy_overfit() -> Outcome {
    let start = Instant::now();
    let data = toy_set();
    let (model, hist) =
        train_ctn(CtnArch::default(), &data, &TrainConfig::default()).map_err(|e| e.to_string())?;
    let acc = evaluate(&model, &data).map_err(|e| e.to_string())?.accuracy;
    ensure(acc == 1.0, || format!("train accuracy {acc}"))?;
    for w in hist[2..].windows(2) {
        ensure(w[1].loss <= w[0].loss, || {
            format!(
                "loss rose at epoch {}: {} -> {}",
                w[1].epoch, w[0].loss, w[1].loss
            )
        })?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120))?;
    Ok(format!(
        "acc 1.0, final loss {:.2e}, {elapsed:.1?}",
        hist.last().unwrap().loss
    ))
}

fn c8_synthetic_end_to_end(dir: &Path) -> Outcome {
    let start = Instant::now();
    let spec = SyntheticCorpusSpec {
        n_per_class: 100,
        seed: 42,
        ..Default::default()
    };
    let m = gen_synthetic_corpus(&spec, dir.join("corpus")).map_err(|e| e.to_string())?;
    let cfg = ExperimentConfig::default().with_seed(42);
    let report = run_comparison(&m, &[Scheme::hit(Cut::Eight)], &[Feature::Cnn], &cfg, None)
        .map_err(|e| e.to_string())?;
    let val = report.rows[0].val_acc;
    let viz = mean_viz(&m, &cfg.transform, dir.join("means")).map_err(|e| e.to_string())?;
    let (gb, gm) = (viz.benign.channel_mean(1), viz.malicious.channel_mean(1));
    let summary = format!(
        "val_acc {val:.4} on {} files, green benign {gb:.4} vs malicious {gm:.4}",
        report.n_val
    );
    ensure(val >= 0.95 && gb > gm, || summary.clone())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(600))?;
    Ok(format!("{summary}, {elapsed:.0?}"))
}

fn c9_compare_parity(dir: &Path) -> Outcome {
    let spec = SyntheticCorpusSpec {
        n_per_class: 20,
        seed: 9,
        min_size: 2048,
        max_size: 6144,
    };
    gen_synthetic_corpus(&spec, dir.join("corpus")).map_err(|e| e.to_string())?;
    let manifest = dir.join("corpus/manifest.csv");
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let out = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hitviz"))
            .args(["--seed", "42", "--size", "32", "compare", "--manifest"])
            .arg(&manifest)
            .arg("--out")
            .arg(&out)
            .args([
                "--features",
                "gist+knn,cnn",
                "--epochs",
                "5",
                "--batch-size",
                "8",
            ])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            String::from_utf8_lossy(&status.stderr).into_owned()
        })?;
        std::fs::read(out).map_err(|e| e.to_string())
    };
    let (a, b) = (run("a.json")?, run("b.json")?);
    ensure(a == b, || "reports differ between runs".into())?;
    let v: serde_json::Value = serde_json::from_slice(&a).map_err(|e| e.to_string())?;
    let rows = v["rows"].as_array().map(Vec::len).unwrap_or(0);
    ensure(rows == 12, || format!("{rows} rows, expected 12"))?;

    // two byte distributions with disjoint ranges
    let mut r = rng::seeded(99);
    let mut set = FeatureSet::new(256);
    for i in 0..40 {
        let label = Label::from_index(i % 2).unwrap();
        let range = if label == Label::Benign {
            0..=100u8
        } else {
            156..=255u8
        };
        let bytes: Vec<u8> = (0..r.random_range(64..512))
            .map(|_| r.random_range(range.clone()))
            .collect();
        let vector = baselines::raw_vector(&bytes, 256).map_err(|e| e.to_string())?;
        set.push(FeatureRow {
            id: format!("s{i}"),
            vector,
            label,
        })
        .map_err(|e| e.to_string())?;
    }
    let svm = baselines::svm_train(&set, SvmHyper::default()).map_err(|e| e.to_string())?;
    let acc = baselines::svm_evaluate(&svm, &set)
        .map_err(|e| e.to_string())?
        .accuracy;
    ensure(acc == 1.0, || format!("svm-raw training accuracy {acc}"))?;
    Ok(format!(
        "{rows} rows identical across runs, svm-raw acc 1.0"
    ))
}

fn c10_serialization(dir: &Path) -> Outcome {
    for seed in 0..5 {
        let m = CtnModel::init(CtnArch::default(), seed, 1.0).map_err(|e| e.to_string())?;
        let path = dir.join(format!("m{seed}.ctn"));
        save_model(&m, &path).map_err(|e| e.to_string())?;
        let back = load_model(&path).map_err(|e| e.to_string())?;
        let bits = |m: &CtnModel| m.params.iter().map(|p| p.to_bits()).collect::<Vec<_>>();
        ensure(back.arch == m.arch && bits(&back) == bits(&m), || {
            format!("model seed {seed} differs")
        })?;
    }
    let mut r = rng::seeded(10);
    for i in 0..20 {
        let (w, h, c) = (r.random_range(1..80), r.random_range(1..80), [1, 3][i % 2]);
        let mut bytes = vec![0u8; w * h * c];
        r.fill_bytes(&mut bytes);
        let img =
            ImageTensor::new(w, h, c, bytes.iter().map(|&b| b as f64 / 255.0).collect()).unwrap();
        let png = encode_png(&img).map_err(|e| e.to_string())?;
        let mut d = PngDecoder::new(ZCursor::new(&png));
        let decoded = d.decode_raw().map_err(|e| format!("{e:?}"))?;
        ensure(d.dimensions() == Some((w, h)) && decoded == bytes, || {
            format!("png {i} ({w}x{h}x{c}) differs")
        })?;
    }
    Ok("5 models bitwise, 20 PNGs channel-exact".into())
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("temp dir");
    let sub = |name: &str| {
        let p = tmp.path().join(name);
        std::fs::create_dir_all(&p).unwrap();
        p
    };
    let (d8, d9, d10) = (sub("c8"), sub("c9"), sub("c10"));
    let criteria: Vec<Criterion> = vec![
        ("entropy oracle equivalence", Box::new(c1_entropy_oracle)),
        ("entropy bounds", Box::new(c2_entropy_bounds)),
        ("hilbert correctness", Box::new(c3_hilbert)),
        (
            "HIT/entropy structural identity",
            Box::new(c4_hit_entropy_identity),
        ),
        ("partition table conformance", Box::new(c5_partition_table)),
        ("gradient checks", Box::new(c6_gradients)),
        ("toy overfit", Box::new(c7_toy_overfit)),
        (
            "synthetic end-to-end",
            Box::new(move || c8_synthetic_end_to_end(&d8)),
        ),
        (
            "comparison harness parity",
            Box::new(move || c9_compare_parity(&d9)),
        ),
        (
            "serialization round trips",
            Box::new(move || c10_serialization(&d10)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
