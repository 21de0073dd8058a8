//! Pinned end-to-end pipelines compared against packaged reference values.

use anyhow::{anyhow, Result};
use clap::{Args, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use czcp::czcp::p2_cross_profiles;
use czcp::czcp::p2_identities_hold;
use czcp::data::{
    example3, example5, example5_seed, example6, example6_params, table1_expected, table1_pair, ReferenceExample,
    EXAMPLE3_B_REVERSE_CONJUGATE, EXAMPLE3_SECOND_IDENTITY_SQUARED,
};
use czcp::search::verify_rows;
use czcp::simulator::{multipath_sweep, MatrixSource};
use czcp::training::{baseline_matrix, proposed_matrix, BaselineKind, BaselineSpec};
use czcp::{construction1, construction2, czcp_width, Construction1Variant, MseReport, SeedVariant, SimConfig};

use crate::commands::sweep_paths;
use crate::output::Report;

/// Seed of the Monte-Carlo targets when `--seed` is not given.
pub const REPRODUCE_SEED: u64 = 20_200_617;
/// Relative tolerance between an empirical MSE and its analytic value.
pub const MSE_REL_TOL: f64 = 0.03;
/// Accepted mean gap of the random baseline at J = 2, in dB.
pub const RANDOM_GAP_DB: (f64, f64) = (1.0, 2.0);
const EBNO_GRID: [f64; 7] = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0];
/// Path counts resolved exactly by the (16,8) matrix.
const EXACT_PATHS: usize = 9;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Target {
    Table1,
    Example3,
    Example5,
    Example6,
    Fig8a,
    Fig8b,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    target: Target,
    /// Worker threads; 0 uses every core
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Largest table length to re-derive
    #[arg(long, default_value_t = 26)]
    max_n: usize,
    /// Monte-Carlo trials per point
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Monte-Carlo seed
    #[arg(long, default_value_t = REPRODUCE_SEED)]
    seed: u64,
}

pub fn reproduce(args: ReproduceArgs) -> Result<Report> {
    match args.target {
        Target::Table1 => table1(&args),
        Target::Example3 => example(example3(), None),
        Target::Example5 => {
            let (e, f) = example5_seed();
            let built = construction1(&e, &f, 0, 0, 1, Construction1Variant::V1)?;
            example(example5(), Some(built))
        }
        Target::Example6 => example(example6(), Some(construction2(&example6_params())?)),
        Target::Fig8a => bound_attainment(&args),
        Target::Fig8b => multipath(&args),
    }
}

fn table1(args: &ReproduceArgs) -> Result<Report> {
    let mut report = Report::new(
        "reproduce-table1",
        json!({ "max_n": args.max_n, "workers": args.workers }),
    );
    let expected = table1_expected();
    let t = verify_rows(&expected, args.workers, args.max_n)?;
    for r in &t.rows {
        report.check(
            &format!("N={}", r.n),
            r.passed(),
            format!(
                "z_max={} expected {} (witness verified: {})",
                r.found, r.expected, r.witness_verified
            ),
        );
    }
    for p in &t.printed {
        let detail = if p.mismatches.is_empty() {
            format!("width {} stated {}", p.z_found, p.z_stated)
        } else {
            p.mismatches.join("; ")
        };
        report.check(&format!("printed N={}", p.n), p.passed(), detail);
    }
    report.result = serde_json::to_value(&t)?;
    Ok(report)
}

fn squared_diff(name: &str, got: &[i64], want: &[i64]) -> Vec<String> {
    got.iter()
        .zip(want)
        .enumerate()
        .filter(|(_, (g, w))| g != w)
        .map(|(t, (g, w))| format!("{name} at tau={t}: |.|^2 = {g}, expected {w}"))
        .collect()
}

fn example(ex: ReferenceExample, built: Option<czcp::SequencePair>) -> Result<Report> {
    let command = match ex.name {
        "example3" => "reproduce-example3",
        "example5" => "reproduce-example5",
        _ => "reproduce-example6",
    };
    let mut report = Report::new(command, json!({ "example": ex.name }));
    if let Some(b) = &built {
        report.check("construction", *b == ex.pair, format!("built a = {}, b = {}", b.a, b.b));
    }
    let cert = czcp_width(&ex.pair);
    report.check("width", cert.z == ex.z, format!("Z={} expected {}", cert.z, ex.z));
    let aac = cert.aac_sum_squared().ok_or_else(|| anyhow!("profile is not exact"))?;
    let acc = cert.acc_sum_squared().ok_or_else(|| anyhow!("profile is not exact"))?;
    let mut diffs = squared_diff("aac sum", &aac, &ex.aac_sum_squared);
    diffs.extend(squared_diff("acc sum", &acc, &ex.acc_sum_squared));
    report.check(
        "profiles",
        diffs.is_empty(),
        if diffs.is_empty() {
            "all shifts match".to_string()
        } else {
            diffs.join("; ")
        },
    );

    let mut extra = Value::Null;
    if ex.name == "example3" {
        let rc = ex.pair.b.reverse_conjugate();
        report.check(
            "reverse-conjugate",
            rc.phases() == EXAMPLE3_B_REVERSE_CONJUGATE,
            rc.to_string(),
        );
        let (first, second) = p2_identities_hold(&ex.pair, ex.z)?;
        report.check("cross identities", first && second, "both sums vanish on the tail zone");
        let (_, second_profile) = p2_cross_profiles(&ex.pair)?;
        let second_sq: Vec<i64> = second_profile.iter().filter_map(|v| v.norm_sqr_exact()).collect();
        // The printed entry at tau = 1 is a known misprint (the pair gives 40), reported but not failed.
        let misprints = squared_diff("second identity", &second_sq, &EXAMPLE3_SECOND_IDENTITY_SQUARED);
        for m in &misprints {
            report.note(format!("note: printed value differs, {m}"));
        }
        extra = json!({ "second_identity_squared": second_sq, "printed_differences": misprints });
    }
    report.result = json!({ "certificate": serde_json::to_value(&cert)?, "differences": diffs, "extra": extra });
    Ok(report)
}

fn mc_config(args: &ReproduceArgs, grid: Vec<f64>) -> SimConfig {
    SimConfig {
        ebno_grid: grid,
        trials: args.trials,
        rng_seed: args.seed,
        n_r: 1,
        workers: args.workers,
    }
}

fn mc_params(args: &ReproduceArgs) -> Value {
    json!({ "trials": args.trials, "seed": args.seed, "workers": args.workers })
}

/// (8,4)-seeded matrices against the regular random matrices at J = 2, 6, 18 on a 5-path channel.
fn bound_attainment(args: &ReproduceArgs) -> Result<Report> {
    let mut params = mc_params(args);
    params["ebno_grid"] = json!(EBNO_GRID);
    params["n_t"] = json!(4);
    params["paths"] = json!(5);
    params["j"] = json!([2, 6, 18]);
    let mut report = Report::new("reproduce-fig8a", params);
    let cfg = mc_config(args, EBNO_GRID.to_vec());
    let pair = table1_pair(8).ok_or_else(|| anyhow!("missing table pair"))?;
    let mut all = MseReport::default();
    let mut gaps = Vec::new();
    for j in [2usize, 6, 18] {
        let m = proposed_matrix::<f64>(&pair, SeedVariant::Psi1, 4, j)?;
        let name = format!("proposed-J{j}");
        let r = sweep_paths(&MatrixSource::Fixed(m), &name, 4, &[5], &cfg)?;
        let worst = r
            .points
            .iter()
            .map(|p| (p.mse_empirical / p.mse_min - 1.0).abs())
            .fold(0.0, f64::max);
        report.check(
            &name,
            worst <= MSE_REL_TOL,
            format!("within {:.2}% of the minimum", worst * 100.0),
        );
        all.points.extend(r.points);

        let spec = BaselineSpec {
            kind: BaselineKind::Random,
            n_t: 4,
            q_len: 8 * j,
            energy: None,
        };
        let name = format!("random-J{j}");
        let r = sweep_paths(&MatrixSource::Random(spec), &name, 4, &[5], &cfg)?;
        let gap = r.points.iter().map(|p| p.gap_db).sum::<f64>() / r.points.len() as f64;
        report.note(format!("{name}: mean gap {gap:.3} dB"));
        gaps.push(gap);
        all.points.extend(r.points);
    }
    report.check(
        "random gap J=2",
        (RANDOM_GAP_DB.0..=RANDOM_GAP_DB.1).contains(&gaps[0]),
        format!(
            "{:.3} dB, accepted {}..{} dB",
            gaps[0], RANDOM_GAP_DB.0, RANDOM_GAP_DB.1
        ),
    );
    report.check(
        "random gap shrinks",
        gaps[0] > gaps[1] && gaps[1] > gaps[2],
        format!("{:.3} / {:.3} / {:.3} dB", gaps[0], gaps[1], gaps[2]),
    );
    report.csv = Some(all.to_csv());
    report.result = json!({ "random_gap_db": gaps, "points": all.points });
    Ok(report)
}

/// All matrices at 16 dB over 1..=16 paths.
fn multipath(args: &ReproduceArgs) -> Result<Report> {
    let ebno = 16.0;
    let mut params = mc_params(args);
    params["ebno_db"] = json!(ebno);
    params["paths"] = json!("1:16");
    let mut report = Report::new("reproduce-fig8b", params);
    let pair = table1_pair(16).ok_or_else(|| anyhow!("missing table pair"))?;
    let mut list = vec![(
        "proposed".to_string(),
        MatrixSource::Fixed(proposed_matrix::<f64>(&pair, SeedVariant::Psi1, 4, 2)?),
    )];
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for kind in BaselineKind::FIXED {
        let m = baseline_matrix(&BaselineSpec::new(kind), &mut rng)?;
        list.push((kind.name().to_string(), MatrixSource::Fixed(m)));
    }
    for kind in [BaselineKind::RandomBlock, BaselineKind::Random] {
        list.push((kind.name().to_string(), MatrixSource::Random(BaselineSpec::new(kind))));
    }
    let paths: Vec<usize> = (1..=16).collect();
    let r = multipath_sweep(&list, ebno, &paths, &mc_config(args, vec![ebno]))?;

    let mut exact_worst: f64 = 0.0;
    let mut exceeds = true;
    let mut trace_worst: f64 = 0.0;
    let mut singular = Vec::new();
    for p in &r.points {
        if p.is_failed() {
            singular.push(format!("{}@{}", p.matrix, p.paths));
            continue;
        }
        if p.matrix == "proposed" {
            if p.paths <= EXACT_PATHS {
                exact_worst = exact_worst.max((p.mse_empirical / p.mse_min - 1.0).abs());
            } else {
                exceeds &= p.mse_trace.is_some_and(|t| t > p.mse_min);
            }
        }
        if let Some(t) = p.mse_trace {
            trace_worst = trace_worst.max((p.mse_empirical / t - 1.0).abs());
        }
    }
    let proposed_singular = singular.iter().any(|s| s.starts_with("proposed@"));
    report.check(
        "proposed attains the minimum",
        exact_worst <= MSE_REL_TOL && !proposed_singular,
        format!("1..={EXACT_PATHS} paths within {:.2}%", exact_worst * 100.0),
    );
    report.check(
        "proposed exceeds beyond",
        exceeds,
        format!("trace formula above the minimum for > {EXACT_PATHS} paths"),
    );
    report.check(
        "trace formula",
        trace_worst <= MSE_REL_TOL,
        format!("empirical within {:.2}% of the trace value", trace_worst * 100.0),
    );
    if !singular.is_empty() {
        report.note(format!("singular normal matrix (no estimate): {}", singular.join(" ")));
    }

    let at5: Vec<(&str, f64)> = r
        .points
        .iter()
        .filter(|p| p.paths == 5)
        .map(|p| (p.matrix.as_str(), p.gap_db))
        .collect();
    let gap = |name: &str| at5.iter().find(|(m, _)| *m == name).map_or(f64::NAN, |(_, g)| *g);
    let proposed_best = at5
        .iter()
        .filter(|(m, _)| *m != "proposed")
        .all(|(_, g)| *g > gap("proposed"));
    let random_worst = at5
        .iter()
        .filter(|(m, _)| !m.starts_with("random"))
        .all(|(_, g)| *g < gap("random") && *g < gap("random-block"));
    let listing: Vec<String> = at5.iter().map(|(m, g)| format!("{m} {g:.3}")).collect();
    report.check(
        "ordering at 5 paths",
        proposed_best && random_worst,
        format!("gaps (dB): {}", listing.join(", ")),
    );
    report.csv = Some(r.to_csv());
    report.result = json!({ "singular": singular, "points": r.points });
    Ok(report)
}
