//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

#![allow(clippy::needless_range_loop)]

use std::process::Command;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twistorlab_core::catalog::{self, CatalogParams, NAMES};
use twistorlab_core::chern::{classify_definiteness, fine_panov_operator, one_one_defect, wedge_square_coeff, Definiteness};
use twistorlab_core::curvature::frame_curvature;
use twistorlab_core::dsl::{eval_jet2, parse_metric};
use twistorlab_core::lambda2::{
    blocks_from_frame_curvature, frame_curvature_from_blocks, random_asd_blocks, random_blocks, random_so4, rotate_blocks,
    so4_split,
};
use twistorlab_core::oracle::{compare_ddbar_kplus, compare_dk, sample_chart_points, section_frame, verify_structure_equations, Convergence};
use twistorlab_core::twistor::{
    balanced_defect, gauduchon1_minus, gauduchon1_plus, k_wedge_dk, kahler_defect, lambda_from_blocks,
    type_decomposition_coeffs, type_decomposition_from_algebra,
};
use twistorlab_core::{
    analyze_point, CatalogEntry, CurvatureBlocks, LambdaSet, Matrix3, MetricSpec, OracleOptions, Orientation, Sign,
};

type Outcome = Result<String, String>;

const H: f64 = 1e-3;
const SQRT2: f64 = std::f64::consts::SQRT_2;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn entry(name: &str, params: CatalogParams) -> CatalogEntry {
    catalog::get(name, &params).expect("catalog entry")
}

fn default_entry(name: &str) -> CatalogEntry {
    entry(name, CatalogParams::default())
}

fn reversed(name: &str) -> CatalogEntry {
    entry(name, CatalogParams { orientation: Orientation::Reversed, ..Default::default() })
}

fn blocks_at(spec: &MetricSpec, x: [f64; 4]) -> CurvatureBlocks {
    blocks_from_frame_curvature(&analyze_point(spec, x).expect("point").curvature).expect("blocks")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Worst value of `f` over 200 random frame rotations at `x`.
fn sup_over_frames(spec: &MetricSpec, x: [f64; 4], seed: u64, f: impl Fn(&CurvatureBlocks) -> f64) -> f64 {
    let curv = analyze_point(spec, x).expect("point").curvature;
    let mut r = rng(seed);
    (0..200)
        .map(|_| f(&blocks_from_frame_curvature(&curv.rotated(&random_so4(&mut r))).expect("blocks")))
        .fold(0.0, f64::max)
}

fn c1_calibration() -> Outcome {
    let e = default_entry("sphere4");
    let mut worst: f64 = 0.0;
    for x in e.spec.sample_points(10, &mut rng(1)) {
        let b = blocks_at(&e.spec, x);
        let l = lambda_from_blocks(&b, 1.0);
        let errs = [
            (b.scalar() - 12.0).abs(),
            (b.a - Matrix3::identity()).amax(),
            (b.c - Matrix3::identity()).amax(),
            b.b.amax(),
            (l.l12 - 0.5).abs(),
        ];
        worst = errs.iter().fold(worst, |m, v| m.max(*v));
    }
    ensure(worst < 1e-8, || format!("max deviation {worst:e}"))?;
    Ok(format!("s, A, C, B, lambda12 within {worst:.1e} at 10 points"))
}

fn t_grid() -> Vec<f64> {
    (0..16).map(|i| if i == 15 { 2.0 } else { 0.5 + 0.1 * i as f64 }).collect()
}

fn c2_kahler_point() -> Outcome {
    let e = default_entry("sphere4");
    let pts = e.spec.sample_points(5, &mut rng(2));
    let mut zeros = Vec::new();
    let mut g_err: f64 = 0.0;
    for t in t_grid() {
        let mut kp: f64 = 0.0;
        for &x in &pts {
            let b = blocks_at(&e.spec, x);
            let l = lambda_from_blocks(&b, t);
            kp = kp.max(kahler_defect(&l, Sign::Plus));
            g_err = g_err.max((gauduchon1_plus(&b, &l) - 2.0 * (1.0 - t * t).powi(2)).abs());
        }
        if kp < 1e-8 {
            zeros.push(t);
        }
    }
    ensure(zeros == [1.0], || format!("kahler_plus_defect vanishes at {zeros:?}"))?;
    ensure(g_err < 1e-8, || format!("gauduchon1_plus off 2(1-t^2)^2 by {g_err:e}"))?;
    Ok(format!("unique zero at t = 1 on 16-point grid; 2(1-t^2)^2 within {g_err:.1e}"))
}

fn c3_gauduchon_minus() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [1.0, 2.0] {
        let e = entry("sphere4", CatalogParams { r, ..Default::default() });
        for x in e.spec.sample_points(5, &mut rng(3)) {
            let b = blocks_at(&e.spec, x);
            for t in [0.1, 1.0, 10.0] {
                worst = worst.max(gauduchon1_minus(&b, &lambda_from_blocks(&b, t)).abs());
            }
        }
    }
    ensure(worst < 1e-8, || format!("sphere4: |gauduchon1_minus| up to {worst:e}"))?;
    let b = 0.2;
    let synth = CurvatureBlocks::new(Matrix3::identity(), Matrix3::from_diagonal(&[0.0, b, 0.0].into()), Matrix3::identity());
    let mut conv: f64 = 0.0;
    for t in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let g = gauduchon1_minus(&synth, &lambda_from_blocks(&synth, t));
        conv = conv.max((g + t.powi(4) * b * b).abs());
    }
    ensure(conv < 1e-10, || format!("synthetic ASD: off -t^4 b^2 by {conv:e}"))?;
    Ok(format!("sphere4 max {worst:.1e}; synthetic -t^4 b^2 within {conv:.1e}"))
}

fn c4_balanced() -> Outcome {
    let cases = [
        (default_entry("flat"), true),
        (default_entry("sphere4"), true),
        (reversed("cp2_fs"), true),
        (default_entry("s2xs2"), false),
        (default_entry("cp2_fs"), false),
    ];
    let mut summary = Vec::new();
    for (k, (e, asd)) in cases.iter().enumerate() {
        let x = e.spec.sample_points(1, &mut rng(40 + k as u64))[0];
        let b = blocks_at(&e.spec, x);
        ensure((b.asd_defect() < 1e-8) == *asd, || format!("{}: asd_defect {:e}", e.name, b.asd_defect()))?;
        let sup = sup_over_frames(&e.spec, x, 4, |b| balanced_defect(&lambda_from_blocks(b, 1.0)));
        let ok = if *asd { sup < 1e-8 } else { sup > 1e-3 };
        ensure(ok, || format!("{} ({:?}): sup balanced_defect {sup:e}", e.name, e.spec.orientation()))?;
        summary.push(format!("{}={sup:.1e}", e.name));
    }
    let mut r = rng(41);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let t = rand_chacha::rand_core::RngCore::next_u32(&mut r) as f64 / u32::MAX as f64 * 3.0 + 0.05;
        let l = LambdaSet::random(&mut r, t);
        worst = worst.max((k_wedge_dk(&l, Sign::Plus) + k_wedge_dk(&l, Sign::Minus)).max_abs());
    }
    ensure(worst < 1e-12, || format!("K+ dK+ + K- dK- up to {worst:e}"))?;
    Ok(format!("sup {}; antisymmetry {worst:.1e}", summary.join(", ")))
}

fn c5_fine_panov() -> Outcome {
    let sphere = fine_panov_operator(&blocks_at(&default_entry("sphere4").spec, [0.2, -0.1, 0.3, 0.4]));
    let class = classify_definiteness(&sphere);
    ensure((sphere - Matrix3::identity()).amax() < 1e-8, || format!("sphere4 D = {sphere}"))?;
    ensure(class.class == Definiteness::PositiveDefinite, || format!("sphere4 class {:?}", class.class))?;

    let s2 = default_entry("s2xs2");
    let d = classify_definiteness(&fine_panov_operator(&blocks_at(&s2.spec, [1.0, 0.5, 1.2, -0.4])));
    let want = [0.0, 0.0, 1.0];
    ensure(d.eigenvalues.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-8), || format!("s2xs2 eigenvalues {:?}", d.eigenvalues))?;
    ensure(d.class == Definiteness::Semidefinite, || format!("s2xs2 class {:?}", d.class))?;

    let flat = fine_panov_operator(&blocks_at(&default_entry("flat").spec, [0.1, 0.2, 0.3, 0.4]));
    ensure(flat.amax() == 0.0, || format!("flat D = {flat}"))?;
    ensure(classify_definiteness(&flat).class == Definiteness::Semidefinite, || "flat class".into())?;

    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let s = -30.0 + 60.0 * k as f64 / 49.0;
        let mut b = random_asd_blocks(&mut r, s, 1.0);
        b.b = Matrix3::zeros();
        worst = worst.max((fine_panov_operator(&b) - Matrix3::identity() * (s / 12.0).powi(2)).amax());
    }
    ensure(worst < 1e-9, || format!("ASD Einstein D off (s/12)^2 Id by {worst:e}"))?;
    Ok(format!("sphere4 Id, s2xs2 (1,0,0), flat 0; ASD Einstein within {worst:.1e}"))
}

fn c6_one_one() -> Outcome {
    let mut entries: Vec<CatalogEntry> = NAMES.iter().map(|n| default_entry(n)).collect();
    entries.push(reversed("cp2_fs"));
    entries.push(reversed("sphere4"));
    let mut checked = 0;
    for (k, e) in entries.iter().enumerate() {
        for x in e.spec.sample_points(2, &mut rng(60 + k as u64)) {
            let asd = blocks_at(&e.spec, x).asd_defect() < 1e-8;
            let sup = sup_over_frames(&e.spec, x, 6, one_one_defect);
            ensure((sup < 1e-8) == asd, || format!("{} at {x:?}: asd {asd}, sup {sup:e}", e.name))?;
            checked += 1;
        }
    }
    let mut r = rng(61);
    for k in 0..50 {
        let b = if k % 2 == 0 { random_asd_blocks(&mut r, 6.0, 1.0) } else { random_blocks(&mut r, 1.0) };
        let asd = b.asd_defect() < 1e-8;
        let sup = (0..200)
            .map(|_| one_one_defect(&rotate_blocks(&b, &random_so4(&mut r)).expect("rotation")))
            .fold(0.0, f64::max);
        ensure((sup < 1e-8) == asd, || format!("synthetic #{k}: asd {asd}, sup {sup:e}"))?;
    }
    Ok(format!("{checked} catalog points and 50 synthetic blocks agree"))
}

fn c7_wedge_square() -> Outcome {
    let sphere = default_entry("sphere4");
    let w = wedge_square_coeff(&analyze_point(&sphere.spec, [0.3, 0.1, -0.2, 0.5]).expect("point").curvature);
    ensure((w - 2.0).abs() < 1e-9, || format!("sphere4 coefficient {w}"))?;
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let s = -30.0 + 60.0 * k as f64 / 49.0;
        let mut b = random_asd_blocks(&mut r, s, 1.0);
        b.b = Matrix3::zeros();
        let rotated = rotate_blocks(&b, &random_so4(&mut r)).expect("rotation");
        worst = worst.max((wedge_square_coeff(&frame_curvature_from_blocks(&rotated)) - s * s / 72.0).abs());
    }
    let cp2 = reversed("cp2_fs");
    for x in cp2.spec.sample_points(3, &mut rng(70)) {
        let c = analyze_point(&cp2.spec, x).expect("point").curvature;
        let s = c.scalar();
        worst = worst.max((wedge_square_coeff(&c) - s * s / 72.0).abs());
    }
    ensure(worst < 1e-9, || format!("off s^2/72 by {worst:e}"))?;
    Ok(format!("sphere4 {w}; ASD Einstein within {worst:.1e}"))
}

fn c8_covariance() -> Outcome {
    let e = entry("perturbed_flat", CatalogParams { eps: 0.3, ..Default::default() });
    let geo = analyze_point(&e.spec, [0.4, -0.3, 0.2, 0.5]).expect("point");
    let base = blocks_from_frame_curvature(&geo.curvature).expect("blocks");
    let mut r = rng(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = random_so4(&mut r);
        let direct = blocks_from_frame_curvature(&frame_curvature(&geo.riemann, &geo.frame.rotated(&a))).expect("blocks");
        let predicted = rotate_blocks(&base, &a).expect("rotation");
        worst = worst
            .max((direct.a - predicted.a).amax())
            .max((direct.b - predicted.b).amax())
            .max((direct.c - predicted.c).amax());
    }
    ensure(worst < 1e-9, || format!("rotated-frame blocks off by {worst:e}"))?;
    let mut hom: f64 = 0.0;
    for _ in 0..100 {
        let (a, b) = (random_so4(&mut r), random_so4(&mut r));
        let (ap, am) = so4_split(&a).expect("split");
        let (bp, bm) = so4_split(&b).expect("split");
        let (cp, cm) = so4_split(&(a * b)).expect("split");
        hom = hom.max((cp - ap * bp).amax()).max((cm - am * bm).amax());
    }
    ensure(hom < 1e-9, || format!("so4_split homomorphism off by {hom:e}"))?;
    Ok(format!("covariance {worst:.1e}, homomorphism {hom:.1e}"))
}

fn convergence_ok(c: &Convergence) -> bool {
    c.residual < 10.0 * H * H && (3.5..=4.5).contains(&c.ratio)
}

fn c9_chart_oracle(info: &mut Vec<String>) -> Outcome {
    let opts = OracleOptions::default();
    let cases: [(CatalogEntry, &[Sign]); 3] = [
        (default_entry("flat"), &[Sign::Plus, Sign::Minus]),
        (default_entry("sphere4"), &[Sign::Plus]),
        (entry("perturbed_flat", CatalogParams { eps: 0.01, ..Default::default() }), &[Sign::Plus, Sign::Minus]),
    ];
    let (mut worst, mut rmin, mut rmax, mut gram) = (0.0f64, f64::INFINITY, 0.0f64, 0.0f64);
    for (k, (e, signs)) in cases.iter().enumerate() {
        let pts = sample_chart_points(&e.spec, 5, &mut rng(90 + k as u64));
        for &p in &pts {
            for t in [1.0, SQRT2] {
                let mut checks: Vec<(String, Convergence)> = Vec::new();
                for &sign in *signs {
                    let c = compare_dk(&e.spec, p, t, sign, H, opts).map_err(|err| err.to_string())?;
                    checks.push((format!("dK {sign:?}"), c));
                }
                let st = verify_structure_equations(&e.spec, p, t, H, opts).map_err(|err| err.to_string())?;
                checks.push(("structure first".into(), st.first));
                checks.push(("structure phi3".into(), st.phi3));
                checks.push(("chern trace".into(), st.chern_trace));
                for (label, c) in &checks {
                    ensure(convergence_ok(c), || format!("{} t={t} {label} at {:?}: {c:?}", e.name, p.coords()))?;
                    worst = worst.max(c.residual);
                    rmin = rmin.min(c.ratio);
                    rmax = rmax.max(c.ratio);
                }
                let g = section_frame(&e.spec, p, t, opts).map_err(|err| err.to_string())?.gram_defect();
                ensure(g < 1e-9, || format!("{} Gram defect {g:e}", e.name))?;
                gram = gram.max(g);
            }
        }
    }
    // d𝕂₋ on the round sphere is reported, not judged
    let sphere = default_entry("sphere4");
    let (mut m_worst, mut m_over, mut m_rmin, mut m_rmax) = (0.0f64, 0, f64::INFINITY, 0.0f64);
    for &p in &sample_chart_points(&sphere.spec, 5, &mut rng(91)) {
        for t in [1.0, SQRT2] {
            let c = compare_dk(&sphere.spec, p, t, Sign::Minus, H, opts).map_err(|err| err.to_string())?;
            m_worst = m_worst.max(c.residual);
            m_over += usize::from(c.residual >= 10.0 * H * H);
            m_rmin = m_rmin.min(c.ratio);
            m_rmax = m_rmax.max(c.ratio);
        }
    }
    info.push(format!(
        "sphere4 dK- (not judged): max residual {m_worst:.2e}, {m_over}/10 above 10h^2, ratio [{m_rmin:.3}, {m_rmax:.3}]"
    ));
    Ok(format!("max residual {worst:.2e} < {:.0e}, ratios [{rmin:.3}, {rmax:.3}], Gram {gram:.1e}", 10.0 * H * H))
}

fn c10_type_decomposition() -> Outcome {
    let mut r = rng(10);
    let mut alg: f64 = 0.0;
    for k in 0..50 {
        let l = LambdaSet::random(&mut r, 0.2 + 0.05 * k as f64);
        alg = alg.max(type_decomposition_coeffs(&l).max_diff(&type_decomposition_from_algebra(&l)));
    }
    ensure(alg < 1e-12, || format!("closed form vs algebra {alg:e}"))?;
    let sphere = default_entry("sphere4");
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    for &p in &sample_chart_points(&sphere.spec, 3, &mut rng(100)) {
        for t in [1.0, SQRT2] {
            let c = compare_ddbar_kplus(&sphere.spec, p, t, H, OracleOptions::default()).map_err(|err| err.to_string())?;
            ensure(c.residual < 10.0 * H * H, || format!("t={t} at {:?}: {c:?}", p.coords()))?;
            worst = worst.max(c.residual);
            ratios.push(c.ratio);
        }
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    Ok(format!("algebra {alg:.1e}; sphere4 ddbar K+ residual {worst:.2e}, ratios [{lo:.3}, {hi:.3}]"))
}

fn c11_dsl_jets() -> Outcome {
    let mut entries: Vec<CatalogEntry> = NAMES.iter().map(|n| default_entry(n)).collect();
    entries.push(entry("sphere4", CatalogParams { r: 2.0, ..Default::default() }));
    entries.push(entry("s2xs2", CatalogParams { r1: 1.0, r2: 2.0, ..Default::default() }));
    let mut worst: f64 = 0.0;
    for (k, e) in entries.iter().enumerate() {
        let spec = parse_metric(&e.dsl).map_err(|err| err.to_string())?;
        let again = parse_metric(&spec.to_dsl()).map_err(|err| err.to_string())?;
        let pts = spec.sample_points(100, &mut rng(110 + k as u64));
        for x in &pts {
            let (a, b) = (spec.eval_values(x).map_err(|e| e.to_string())?, again.eval_values(x).map_err(|e| e.to_string())?);
            ensure(a == b, || format!("{}: round trip differs at {x:?}", e.name))?;
        }
        for x in pts.iter().take(10) {
            let jets = eval_jet2(&spec, x).map_err(|err| err.to_string())?;
            for i in 0..4 {
                for j in i..4 {
                    let jet = jets[i][j];
                    for m in 0..4 {
                        let step = |h: f64, v: f64| {
                            let mut y = *x;
                            y[m] += h * v;
                            y
                        };
                        let g = |y: &[f64; 4]| spec.eval_values(y).expect("value")[(i, j)];
                        let h = 1e-4;
                        let fd = (g(&step(h, 1.0)) - g(&step(h, -1.0))) / (2.0 * h);
                        worst = worst.max((jet.grad[m] - fd).abs() / fd.abs().max(1.0));
                        let h = 1e-3;
                        for n in 0..4 {
                            let gp = eval_jet2(&spec, &step(h, 1.0)).expect("jet")[i][j].grad[n];
                            let gm = eval_jet2(&spec, &step(h, -1.0)).expect("jet")[i][j].grad[n];
                            let fd = (gp - gm) / (2.0 * h);
                            worst = worst.max((jet.hess(m, n) - fd).abs() / fd.abs().max(1.0));
                        }
                    }
                }
            }
        }
    }
    ensure(worst < 1e-5, || format!("jet vs differences {worst:e}"))?;
    Ok(format!("round trip exact at 100 points per entry; jets within {worst:.1e} relative"))
}

fn c12_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_twistorlab"))
            .args(["analyze", "--manifold", "perturbed_flat", "--points", "16", "--seed", "12", "--t-min", "0.5", "--t-max", "2", "--t-steps", "4"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), || String::from_utf8_lossy(&a.stderr).into_owned())?;
    ensure(a.stdout == b.stdout, || "reports differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let mut info = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("calibration on the unit sphere", c1_calibration()),
        ("Kaehler point of sphere4", c2_kahler_point()),
        ("first Gauduchon condition for J-", c3_gauduchon_minus()),
        ("balanced iff anti-self-dual", c4_balanced()),
        ("Fine-Panov operator", c5_fine_panov()),
        ("(1,1) Chern form iff anti-self-dual", c6_one_one()),
        ("Chern form wedge square", c7_wedge_square()),
        ("frame covariance", c8_covariance()),
        ("chart oracle", c9_chart_oracle(&mut info)),
        ("type decomposition", c10_type_decomposition()),
        ("DSL and jets", c11_dsl_jets()),
        ("determinism", c12_determinism()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    for line in info {
        println!("info: {line}");
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
