use rayon::prelude::*;
use serde::Serialize;
use twistorlab_core::chern::{chern_data, ChernData, Definiteness};
use twistorlab_core::lambda2::blocks_from_frame_curvature;
use twistorlab_core::oracle::{
    compare_ddbar_kplus, compare_dk, kahler_compatibility_defect, sample_chart_points, section_frame,
    verify_structure_equations, Convergence, OracleOptions, StructureReport,
};
use twistorlab_core::twistor::{lambda_from_blocks, twistor_defects};
use twistorlab_core::{analyze_point, CurvatureBlocks, LambdaSet, MetricSpec, Sign, TwistorDefects};

use crate::config::{ConfigEcho, RunConfig};
use crate::error::CliError;

pub const SCHEMA: &str = "twistorlab/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Gram and Hermitian-form checks in the chart oracle.
pub const ORACLE_EXACT_TOL: f64 = 1e-9;
pub const RATIO_RANGE: [f64; 2] = [3.5, 4.5];

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub zero: f64,
    pub h: f64,
    pub oracle_threshold: f64,
    pub oracle_exact: f64,
    pub ratio_range: [f64; 2],
}

impl Tolerances {
    fn new(cfg: &RunConfig) -> Self {
        Self {
            zero: cfg.tol,
            h: cfg.h,
            oracle_threshold: 10.0 * cfg.h * cfg.h,
            oracle_exact: ORACLE_EXACT_TOL,
            ratio_range: RATIO_RANGE,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlocksRecord {
    pub a: [[f64; 3]; 3],
    pub b: [[f64; 3]; 3],
    pub c: [[f64; 3]; 3],
}

impl From<&CurvatureBlocks> for BlocksRecord {
    fn from(b: &CurvatureBlocks) -> Self {
        let arr = |m: &twistorlab_core::Matrix3<f64>| std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]));
        Self {
            a: arr(&b.a),
            b: arr(&b.b),
            c: arr(&b.c),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistorRecord {
    pub lambda: LambdaSet,
    pub defects: TwistorDefects,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub coords: [f64; 4],
    pub s: f64,
    pub w_plus_norm: f64,
    pub w_minus_norm: f64,
    pub b_norm: f64,
    pub blocks_norm: f64,
    pub blocks: Option<BlocksRecord>,
    pub twistor: Option<Vec<TwistorRecord>>,
    pub chern: Option<ChernData>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stat {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Stat {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut min, mut max, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
        for v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            n += 1;
        }
        Self {
            min,
            max,
            mean: sum / n as f64,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistorAggregate {
    pub t: f64,
    pub balanced_defect: Stat,
    pub kahler_plus_defect: Stat,
    pub kahler_minus_defect: Stat,
    pub gauduchon1_plus: Stat,
    pub gauduchon1_minus: Stat,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Flags {
    pub asd: bool,
    pub einstein: bool,
    pub constant_s: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Aggregates {
    pub s: Stat,
    pub w_plus_norm: Stat,
    pub w_minus_norm: Stat,
    pub b_norm: Stat,
    pub twistor: Option<Vec<TwistorAggregate>>,
    pub definiteness: Option<Vec<Definiteness>>,
    pub flags: Flags,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: ConfigEcho,
    pub tolerances: Tolerances,
    pub points: Vec<PointRecord>,
    pub aggregates: Aggregates,
}

fn analyze_one(cfg: &RunConfig, spec: &MetricSpec, index: usize, x: [f64; 4], ts: &[f64]) -> Result<PointRecord, CliError> {
    let fail = |e: twistorlab_core::Error| CliError::from(e).at(x.to_vec());
    let geo = analyze_point(spec, x).map_err(fail)?;
    let blocks = blocks_from_frame_curvature(&geo.curvature).map_err(fail)?;
    let twistor = cfg.analyses.twistor.then(|| {
        ts.iter()
            .map(|&t| TwistorRecord {
                lambda: lambda_from_blocks(&blocks, t),
                defects: twistor_defects(&blocks, t),
            })
            .collect()
    });
    Ok(PointRecord {
        index,
        coords: x,
        s: blocks.scalar(),
        w_plus_norm: blocks.asd_defect(),
        w_minus_norm: blocks.w_minus_norm(),
        b_norm: blocks.einstein_defect(),
        blocks_norm: blocks.norm(),
        blocks: cfg.analyses.blocks.then(|| BlocksRecord::from(&blocks)),
        twistor,
        chern: cfg.analyses.chern.then(|| chern_data(&blocks, &geo.curvature)),
    })
}

fn aggregate(cfg: &RunConfig, points: &[PointRecord], ts: &[f64]) -> Aggregates {
    let stat = |f: fn(&PointRecord) -> f64| Stat::of(points.iter().map(f));
    let s = stat(|p| p.s);
    let zero = |v: f64, scale: f64| v <= cfg.tol * scale.max(1.0);
    let flags = Flags {
        asd: points.iter().all(|p| zero(p.w_plus_norm, p.blocks_norm)),
        einstein: points.iter().all(|p| zero(p.b_norm, p.blocks_norm)),
        constant_s: zero(s.max - s.min, s.max.abs().max(s.min.abs())),
    };
    let twistor = cfg.analyses.twistor.then(|| {
        ts.iter()
            .enumerate()
            .map(|(k, &t)| {
                let d = |f: fn(&TwistorDefects) -> f64| {
                    Stat::of(points.iter().map(|p| f(&p.twistor.as_ref().expect("twistor records")[k].defects)))
                };
                TwistorAggregate {
                    t,
                    balanced_defect: d(|x| x.balanced_defect),
                    kahler_plus_defect: d(|x| x.kahler_plus_defect),
                    kahler_minus_defect: d(|x| x.kahler_minus_defect),
                    gauduchon1_plus: d(|x| x.gauduchon1_plus),
                    gauduchon1_minus: d(|x| x.gauduchon1_minus),
                }
            })
            .collect()
    });
    Aggregates {
        s,
        w_plus_norm: stat(|p| p.w_plus_norm),
        w_minus_norm: stat(|p| p.w_minus_norm),
        b_norm: stat(|p| p.b_norm),
        twistor,
        definiteness: cfg
            .analyses
            .chern
            .then(|| points.iter().map(|p| p.chern.as_ref().expect("chern data").class.class).collect()),
        flags,
    }
}

fn analyze_points(cfg: &RunConfig, spec: &MetricSpec, samples: &[[f64; 4]], ts: &[f64]) -> Result<Vec<PointRecord>, CliError> {
    // indexed parallel collect keeps sample order
    samples
        .par_iter()
        .enumerate()
        .map(|(i, &x)| analyze_one(cfg, spec, i, x, ts))
        .collect()
}

pub fn run_analyze(cfg: &RunConfig) -> Result<Report, CliError> {
    let (spec, samples) = cfg.spec_and_samples()?;
    let ts = cfg.t.values();
    let points = analyze_points(cfg, &spec, &samples, &ts)?;
    let aggregates = aggregate(cfg, &points, &ts);
    Ok(Report {
        schema: SCHEMA,
        version: VERSION,
        command: "analyze",
        config: cfg.echo(),
        tolerances: Tolerances::new(cfg),
        points,
        aggregates,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScanRow {
    pub t: f64,
    /// Mean over samples.
    pub gauduchon1_plus: f64,
    /// Mean over samples.
    pub gauduchon1_minus: f64,
    /// Maximum over samples.
    pub kahler_plus_defect: f64,
    /// Maximum over samples.
    pub kahler_minus_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: ConfigEcho,
    pub tolerances: Tolerances,
    pub rows: Vec<ScanRow>,
}

pub fn run_scan_t(cfg: &RunConfig) -> Result<ScanReport, CliError> {
    let (spec, samples) = cfg.spec_and_samples()?;
    let ts = cfg.t.values();
    let mut inner = cfg.clone();
    inner.analyses.twistor = true;
    let points = analyze_points(&inner, &spec, &samples, &ts)?;
    let agg = aggregate(&inner, &points, &ts);
    let rows = agg
        .twistor
        .expect("twistor aggregates")
        .iter()
        .map(|a| ScanRow {
            t: a.t,
            gauduchon1_plus: a.gauduchon1_plus.mean,
            gauduchon1_minus: a.gauduchon1_minus.mean,
            kahler_plus_defect: a.kahler_plus_defect.max,
            kahler_minus_defect: a.kahler_minus_defect.max,
        })
        .collect();
    Ok(ScanReport {
        schema: SCHEMA,
        version: VERSION,
        command: "scan-t",
        config: cfg.echo(),
        tolerances: Tolerances::new(cfg),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleRecord {
    pub index: usize,
    pub x: [f64; 4],
    pub y: [f64; 2],
    pub t: f64,
    pub dk_plus: Option<Convergence>,
    pub dk_minus: Option<Convergence>,
    pub structure: StructureReport,
    pub gram_defect: f64,
    pub kahler_plus_compatibility: f64,
    pub kahler_minus_compatibility: f64,
    pub s: f64,
    pub wedge_square_coeff: f64,
    /// `s²/72`, present for anti-self-dual Einstein points.
    pub wedge_square_expected: Option<f64>,
    /// Present for anti-self-dual Einstein points.
    pub ddbar_kplus: Option<Convergence>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: ConfigEcho,
    pub corrupt_frame: Option<f64>,
    pub tolerances: Tolerances,
    pub records: Vec<OracleRecord>,
    pub pass: bool,
}

fn converged(c: &Convergence) -> bool {
    c.within() && c.second_order()
}

fn oracle_one(
    cfg: &RunConfig,
    spec: &MetricSpec,
    index: usize,
    p: twistorlab_core::TwistorChartPoint,
    t: f64,
) -> Result<OracleRecord, CliError> {
    let opts = OracleOptions {
        corrupt: cfg.corrupt_frame,
        ..Default::default()
    };
    let fail = |e: twistorlab_core::Error| CliError::from(e).at(p.coords().to_vec());
    let h = cfg.h;
    let frame = section_frame(spec, p, t, opts).map_err(fail)?;
    let blocks = frame.blocks().map_err(fail)?;
    let dk = |sign: Sign, on: bool| -> Result<Option<Convergence>, CliError> {
        if on {
            Ok(Some(compare_dk(spec, p, t, sign, h, opts).map_err(fail)?))
        } else {
            Ok(None)
        }
    };
    let dk_plus = dk(Sign::Plus, cfg.signs.plus())?;
    let dk_minus = dk(Sign::Minus, cfg.signs.minus())?;
    let structure = verify_structure_equations(spec, p, t, h, opts).map_err(fail)?;
    let gram_defect = frame.gram_defect();
    let kp = kahler_compatibility_defect(&frame, Sign::Plus);
    let km = kahler_compatibility_defect(&frame, Sign::Minus);
    let s = blocks.scalar();
    let wedge = twistorlab_core::chern::wedge_square_coeff(&frame.curvature);
    let asd_einstein = blocks.is_asd() && blocks.is_einstein();
    let expected = asd_einstein.then_some(s * s / 72.0);
    let ddbar = if asd_einstein {
        Some(compare_ddbar_kplus(spec, p, t, h, opts).map_err(fail)?)
    } else {
        None
    };
    let pass = dk_plus.as_ref().is_none_or(converged)
        && dk_minus.as_ref().is_none_or(converged)
        && structure.within()
        && structure.second_order()
        && gram_defect < ORACLE_EXACT_TOL
        && kp < ORACLE_EXACT_TOL
        && km < ORACLE_EXACT_TOL
        && expected.is_none_or(|w| (wedge - w).abs() < ORACLE_EXACT_TOL)
        && ddbar.as_ref().is_none_or(converged);
    Ok(OracleRecord {
        index,
        x: p.x,
        y: p.y,
        t,
        dk_plus,
        dk_minus,
        structure,
        gram_defect,
        kahler_plus_compatibility: kp,
        kahler_minus_compatibility: km,
        s,
        wedge_square_coeff: wedge,
        wedge_square_expected: expected,
        ddbar_kplus: ddbar,
        pass,
    })
}

pub fn run_oracle(cfg: &RunConfig) -> Result<OracleReport, CliError> {
    cfg.check()?;
    let spec = cfg.load_spec()?;
    let chart_points = sample_chart_points(&spec, cfg.points, &mut cfg.rng());
    let base: Vec<[f64; 4]> = chart_points.iter().map(|p| p.x).collect();
    let diag = twistorlab_core::dsl::validate(&spec, &base);
    if let Some(f) = diag.first_failure() {
        let msg = f.error.clone().unwrap_or_else(|| "metric is not positive definite".into());
        return Err(CliError::validation(msg).at(f.point.to_vec()));
    }
    let jobs: Vec<(twistorlab_core::TwistorChartPoint, f64)> = chart_points
        .iter()
        .flat_map(|p| cfg.t.values().into_iter().map(move |t| (*p, t)))
        .collect();
    let records: Vec<OracleRecord> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, &(p, t))| oracle_one(cfg, &spec, i, p, t))
        .collect::<Result<_, _>>()?;
    let pass = records.iter().all(|r| r.pass);
    Ok(OracleReport {
        schema: SCHEMA,
        version: VERSION,
        command: "oracle",
        config: cfg.echo(),
        corrupt_frame: cfg.corrupt_frame,
        tolerances: Tolerances::new(cfg),
        records,
        pass,
    })
}
