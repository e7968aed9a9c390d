//! Command-line front end: W tables, the inequality sweep, the conjecture
//! ratio scan, product tracking, the puncture reduction cross-check, and a
//! collapse-map demo.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 when a verification
//! command records a violation or mismatch.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tworow::enumeration::{self, ConjectureScan, Thm31Report};
use tworow::tracking::{self, ReductionReport};
use tworow::{
    phi, preimages_direct, BijectiveMap, ComponentType, Error, Label, TrackInstance,
};

/// Largest n enumerated exhaustively without --force.
const ENUM_LIMIT: u32 = 9;
/// Largest n_max for the reduction sweep without --force.
const REDUCTION_LIMIT: u32 = 6;

#[derive(Parser)]
#[command(name = "tworow", version, about = "Two-row array factorization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,

    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Lift the exhaustive size guards.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Component-count table W_k for one component-type.
    Wtable {
        /// Component-type, e.g. "L=1,1;M=2" ("-" for an empty sequence).
        #[arg(long = "type")]
        ctype: String,
    },
    /// Exhaustively check W_{n-l(mu)-1} >= 1/2 W_{n-l(mu)} for all types.
    VerifyThm31 {
        #[arg(long = "n-max", default_value_t = 8)]
        n_max: u32,
    },
    /// Report all consecutive ratios W_k / W_{k+1} and their minima.
    ScanConjecture {
        #[arg(long = "n-max", default_value_t = 8)]
        n_max: u32,
    },
    /// Histogram E-free cycle counts of D composed with every long cycle.
    Track {
        /// Permutation in cycle notation, e.g. "(1 2)(3 4)".
        #[arg(long)]
        d: String,
        /// Tracked labels, comma-separated, e.g. "1,2".
        #[arg(long)]
        e: String,
    },
    /// Cross-check tracking histograms against punctured-array counts.
    VerifyReduction {
        /// Single instance: permutation in cycle notation.
        #[arg(long, requires = "e")]
        d: Option<String>,
        /// Single instance: tracked labels.
        #[arg(long, requires = "d")]
        e: Option<String>,
        /// Sweep bound when no instance is given.
        #[arg(long = "n-max", default_value_t = 5)]
        n_max: u32,
    },
    /// Show the collapse map's forward orbit and fibers for a fixture.
    PhiDemo {
        /// Component-type of the diagonal (default: the sharpness fixture
        /// 5->2;6->1;(3 4)).
        #[arg(long = "type")]
        ctype: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version are not usage errors
            if err.use_stderr() {
                eprintln!("{err}");
                return ExitCode::from(1);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };

    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = cli.workers {
            builder = builder.num_threads(w);
        }
        match builder.build() {
            Ok(pool) => pool,
            Err(err) => {
                eprintln!("error: {err}");
                return ExitCode::from(1);
            }
        }
    };

    match pool.install(|| run(&cli)) {
        Ok((report, findings)) => {
            let out = match cli.output {
                Some(ref path) => fs::write(path, report).map_err(|e| e.to_string()),
                None => {
                    print!("{report}");
                    Ok(())
                }
            };
            if let Err(err) = out {
                eprintln!("error: {err}");
                return ExitCode::from(1);
            }
            if findings {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn config_json(cli: &Cli) -> serde_json::Value {
    let command = match &cli.command {
        Command::Wtable { ctype } => json!({"command": "wtable", "type": ctype}),
        Command::VerifyThm31 { n_max } => json!({"command": "verify-thm31", "n_max": n_max}),
        Command::ScanConjecture { n_max } => {
            json!({"command": "scan-conjecture", "n_max": n_max})
        }
        Command::Track { d, e } => json!({"command": "track", "d": d, "e": e}),
        Command::VerifyReduction { d, e, n_max } => {
            json!({"command": "verify-reduction", "d": d, "e": e, "n_max": n_max})
        }
        Command::PhiDemo { ctype } => json!({"command": "phi-demo", "type": ctype}),
    };
    let mut config = command;
    config["format"] = json!(cli.format.name());
    config["workers"] = json!(cli.workers);
    config["force"] = json!(cli.force);
    config
}

/// Runs the command; returns the rendered report and whether findings were
/// recorded (exit status 2).
fn run(cli: &Cli) -> Result<(String, bool), Error> {
    let config = config_json(cli);
    match &cli.command {
        Command::Wtable { ctype } => {
            let t: ComponentType = ctype.parse()?;
            check_enum_limit(t.n(), cli.force)?;
            let table = enumeration::w_table(&t)?;
            let report = match cli.format {
                Format::Json => json_report(&config, json!({"wtable": table})),
                Format::Csv => {
                    let mut s = csv_header(&config, "type,k,count");
                    for (k, v) in &table.counts {
                        writeln!(s, "{},{k},{v}", table.ctype).unwrap();
                    }
                    s
                }
                Format::Text => {
                    let mut s = text_header(&config);
                    writeln!(s, "W table for {} (n = {}):", table.ctype, table.n).unwrap();
                    for (k, v) in &table.counts {
                        writeln!(s, "  W_{k} = {v}").unwrap();
                    }
                    s
                }
            };
            Ok((report, false))
        }
        Command::VerifyThm31 { n_max } => {
            check_enum_limit(*n_max, cli.force)?;
            let report = enumeration::verify_theorem31(*n_max)?;
            let findings = report.violations > 0;
            Ok((render_thm31(cli.format, &config, &report), findings))
        }
        Command::ScanConjecture { n_max } => {
            check_enum_limit(*n_max, cli.force)?;
            let scan = enumeration::scan_conjecture(*n_max)?;
            Ok((render_scan(cli.format, &config, &scan), false))
        }
        Command::Track { d, e } => {
            let inst = parse_instance(d, e)?;
            let report = tracking::track_counts(&inst, cli.force)?;
            let rendered = match cli.format {
                Format::Json => json_report(
                    &config,
                    json!({
                        "theta": report.theta,
                        "histogram": histogram_json(&report.histogram),
                        "hypothesis": report.hypothesis_satisfied,
                        "reduction_type": inst.punctured_type().to_string(),
                    }),
                ),
                Format::Csv => {
                    let mut s = csv_header(&config, "j,count");
                    for (j, v) in report.histogram.iter().rev() {
                        writeln!(s, "{j},{v}").unwrap();
                    }
                    s
                }
                Format::Text => {
                    let mut s = text_header(&config);
                    writeln!(s, "theta = {}", report.theta).unwrap();
                    writeln!(s, "hypothesis satisfied: {}", report.hypothesis_satisfied).unwrap();
                    for (j, v) in report.histogram.iter().rev() {
                        writeln!(s, "  {v} long cycles give {j} E-free cycles").unwrap();
                    }
                    s
                }
            };
            Ok((rendered, false))
        }
        Command::VerifyReduction { d, e, n_max } => {
            let reports = match (d, e) {
                (Some(d), Some(e)) => {
                    let inst = parse_instance(d, e)?;
                    vec![tracking::verify_reduction(&inst, cli.force)?]
                }
                _ => {
                    if *n_max > REDUCTION_LIMIT && !cli.force {
                        return Err(Error::LimitExceeded { n: *n_max, limit: REDUCTION_LIMIT });
                    }
                    let mut reports = Vec::new();
                    for n in 2..=*n_max {
                        for d in tracking::cycle_type_representatives(n) {
                            for e in subsets_ge2(n) {
                                let inst = TrackInstance::new(d.clone(), e)?;
                                reports.push(tracking::verify_reduction(&inst, cli.force)?);
                            }
                        }
                    }
                    reports
                }
            };
            let findings = reports.iter().any(|r| !r.is_clean());
            Ok((render_reduction(cli.format, &config, &reports), findings))
        }
        Command::PhiDemo { ctype } => {
            let d: BijectiveMap = match ctype {
                Some(spec) => {
                    let t: ComponentType = spec.parse()?;
                    check_enum_limit(t.n(), cli.force)?;
                    t.canonical_map()
                }
                None => "5->2;6->1;(3 4)".parse()?,
            };
            run_phi_demo(cli.format, &config, &d)
        }
    }
}

fn check_enum_limit(n: u32, force: bool) -> Result<(), Error> {
    if n > ENUM_LIMIT && !force {
        return Err(Error::LimitExceeded { n, limit: ENUM_LIMIT });
    }
    Ok(())
}

fn parse_instance(d: &str, e: &str) -> Result<TrackInstance, Error> {
    let d = BijectiveMap::from_cycle_notation(d)?;
    let e: Vec<Label> = e
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<_, _>>()?;
    TrackInstance::new(d, e)
}

fn subsets_ge2(n: u32) -> Vec<Vec<Label>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() >= 2 {
            out.push(
                (0..n)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| Label::new(b + 1))
                    .collect(),
            );
        }
    }
    out
}

fn histogram_json(h: &BTreeMap<u32, u64>) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> =
        h.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    serde_json::Value::Object(map)
}

fn json_report(config: &serde_json::Value, body: serde_json::Value) -> String {
    let mut obj = json!({"config": config});
    if let (Some(dst), Some(src)) = (obj.as_object_mut(), body.as_object()) {
        for (k, v) in src {
            dst.insert(k.clone(), v.clone());
        }
    }
    format!("{}\n", serde_json::to_string_pretty(&obj).expect("serializable"))
}

fn csv_header(config: &serde_json::Value, header: &str) -> String {
    format!("# config: {config}\n{header}\n")
}

fn text_header(config: &serde_json::Value) -> String {
    format!("config: {config}\n")
}

fn render_thm31(format: Format, config: &serde_json::Value, report: &Thm31Report) -> String {
    match format {
        Format::Json => json_report(config, serde_json::to_value(report).expect("serializable")),
        Format::Csv => {
            let mut s = csv_header(config, "type,n,k_max,w_max,w_prev,ratio,holds,sharp");
            for e in &report.entries {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    e.ctype, e.n, e.k_max, e.w_max, e.w_prev, e.ratio, e.holds, e.sharp
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = text_header(config);
            writeln!(
                s,
                "checked {} types up to n = {}: {} violations, {} sharp witnesses",
                report.entries.len(),
                report.n_max,
                report.violations,
                report.sharp_witnesses
            )
            .unwrap();
            for e in &report.entries {
                let marker = if !e.holds {
                    "  VIOLATION"
                } else if e.sharp {
                    "  sharp"
                } else {
                    ""
                };
                writeln!(
                    s,
                    "{}: W_{} = {}, W_{} = {}, ratio {}{marker}",
                    e.ctype,
                    e.k_max,
                    e.w_max,
                    e.k_max - 1,
                    e.w_prev,
                    e.ratio
                )
                .unwrap();
            }
            s
        }
    }
}

fn render_scan(format: Format, config: &serde_json::Value, scan: &ConjectureScan) -> String {
    match format {
        Format::Json => json_report(config, serde_json::to_value(scan).expect("serializable")),
        Format::Csv => {
            let mut s = csv_header(config, "type,n,k,w_k,w_k1,ratio,below_threshold");
            for e in &scan.entries {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    e.ctype, e.n, e.k, e.w_k, e.w_k1, e.ratio, e.below_threshold
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = text_header(config);
            for (n, min) in &scan.min_per_n {
                let flag = if *n <= 6 { " (below conjecture threshold)" } else { "" };
                writeln!(s, "n = {n}: min ratio {min}{flag}").unwrap();
            }
            if let Some(min) = scan.overall_min {
                writeln!(s, "overall min ratio: {min}").unwrap();
            }
            writeln!(s, "{} ratios reported, {} undefined", scan.entries.len(), scan.undefined.len())
                .unwrap();
            s
        }
    }
}

fn render_reduction(
    format: Format,
    config: &serde_json::Value,
    reports: &[ReductionReport],
) -> String {
    let clean = reports.iter().filter(|r| r.is_clean()).count();
    match format {
        Format::Json => json_report(
            config,
            json!({
                "instances": reports.len(),
                "clean": clean,
                "reports": reports,
            }),
        ),
        Format::Csv => {
            let mut s = csv_header(config, "d,e,punctured_type,theta,clean,mismatches");
            for r in reports {
                let e: Vec<String> = r.e.iter().map(|v| v.to_string()).collect();
                writeln!(
                    s,
                    "\"{}\",\"{}\",{},{},{},\"{}\"",
                    r.d,
                    e.join(","),
                    r.punctured_type,
                    r.report.theta,
                    r.is_clean(),
                    r.mismatches.join("; ")
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = text_header(config);
            writeln!(s, "{clean}/{} instances clean", reports.len()).unwrap();
            for r in reports.iter().filter(|r| !r.is_clean()) {
                writeln!(s, "MISMATCH d = {}, E = {:?}: {:?}", r.d, r.e, r.mismatches).unwrap();
            }
            s
        }
    }
}

fn run_phi_demo(
    format: Format,
    config: &serde_json::Value,
    d: &BijectiveMap,
) -> Result<(String, bool), Error> {
    let t = d.component_type();
    let fibers = tworow::fibers(d)?;
    let mut orbit = Vec::new();
    let mut disagreements = Vec::new();
    for (image, preimages) in &fibers {
        let direct = preimages_direct(image, d)?;
        if &direct != preimages {
            disagreements.push(image.to_string());
        }
        for psi in preimages {
            let (_, case) = phi(psi, d)?;
            orbit.push(json!({
                "from": psi.to_string(),
                "to": image.to_string(),
                "case": format!("{:?}", case.tag),
                "m": case.m.get(),
                "triple": case.triple.to_string(),
            }));
        }
    }
    let findings = !disagreements.is_empty();
    let report = match format {
        Format::Json => json_report(
            config,
            json!({
                "diagonal": d.to_string(),
                "type": t.to_string(),
                "forward": orbit,
                "fibers": fibers
                    .iter()
                    .map(|(image, pres)| json!({
                        "image": image.to_string(),
                        "preimages": pres.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
                "direct_finder_disagreements": disagreements,
            }),
        ),
        Format::Csv => {
            let mut s = csv_header(config, "from,to,case,m,triple");
            for o in &orbit {
                writeln!(
                    s,
                    "\"{}\",\"{}\",{},{},\"{}\"",
                    o["from"].as_str().unwrap(),
                    o["to"].as_str().unwrap(),
                    o["case"].as_str().unwrap(),
                    o["m"],
                    o["triple"].as_str().unwrap()
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = text_header(config);
            writeln!(s, "diagonal {} of type {t}", d).unwrap();
            writeln!(s, "forward map on the maximum-count arrays:").unwrap();
            for o in &orbit {
                writeln!(
                    s,
                    "  {}  ->  {}  [{} via m={} {}]",
                    o["from"].as_str().unwrap(),
                    o["to"].as_str().unwrap(),
                    o["case"].as_str().unwrap(),
                    o["m"],
                    o["triple"].as_str().unwrap()
                )
                .unwrap();
            }
            writeln!(s, "fibers:").unwrap();
            for (image, pres) in &fibers {
                writeln!(s, "  {image}  <-  {} preimages", pres.len()).unwrap();
                for p in pres {
                    writeln!(s, "    {p}").unwrap();
                }
            }
            if findings {
                writeln!(s, "direct finder disagreed on: {disagreements:?}").unwrap();
            }
            s
        }
    };
    Ok((report, findings))
}
