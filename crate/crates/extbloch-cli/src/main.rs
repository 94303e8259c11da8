//! Command-line front end: parse tri-json documents, run the invariant
//! pipelines, and emit text or JSON reports.

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use extbloch::branchlog::PI2;
use extbloch::ebloch::{
    five_term_instance, nu_vanishes, r_of_sum, sample_ft_plus, verify_five_term_geometric,
};
use extbloch::invariants::{
    analyze_geometric, analyze_labeled, lens_space_class, report_for_shapes, InvariantReport,
};
use extbloch::shapes::{Filling, FillingSpec};
use extbloch::tricomplex::{pachner_23, pachner_32, parse as parse_tri, OrderedTriangulation};
use extbloch::Error;

#[derive(Parser)]
#[command(
    name = "extbloch",
    about = "Extended Bloch group elements and vol + i·cs of hyperbolic 3-manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute volume, Chern–Simons and the β̂ term list of a triangulation.
    Invariants {
        /// Path to a tri-json document.
        input: String,
        /// Dehn filling per cusp: CUSP=α,β or CUSP=α,β,γ,δ (repeatable).
        #[arg(long = "fill", value_name = "CUSP=A,B[,G,D]")]
        fill: Vec<String>,
        /// Which Dehn-filling formula to evaluate.
        #[arg(long, default_value = "direct", value_parser = ["direct", "corrected", "both"])]
        method: String,
        /// Congruence tolerance mod π² (env EXTBLOCH_TOL overrides the default 1e-9).
        #[arg(long)]
        tol: Option<f64>,
        /// Seed for generic choices (base points of labeled complexes).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output format.
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        format: String,
    },
    /// The lens space L(n,1) torsion class: R(β̂) should be π²/n mod π².
    Lens {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        format: String,
    },
    /// Sample lifted five-term instances and report the worst R-residual.
    FiveTermCheck {
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply a Pachner move and report the invariant before and after.
    Pachner {
        input: String,
        /// Move spec: "23:face=T/F" or "32:edge=E".
        #[arg(long = "move", value_name = "SPEC")]
        move_spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn default_tol(cli_tol: Option<f64>) -> f64 {
    cli_tol
        .or_else(|| {
            std::env::var("EXTBLOCH_TOL")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(1e-9)
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Parse(_) | Error::OrderIncompatible { .. } | Error::NotACycle(_) => {
            ExitCode::from(1)
        }
        Error::Flattening(_) | Error::NoSolution => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

#[derive(serde::Serialize)]
struct BetaTermDoc {
    z: [f64; 2],
    p: i64,
    q: i64,
    coef: i64,
}

#[derive(serde::Serialize)]
struct ReportDoc {
    volume: f64,
    cs_mod_pi2: f64,
    cs_over_2pi2_mod_half: f64,
    beta: Vec<BetaTermDoc>,
    method: String,
    warnings: Vec<String>,
}

fn report_doc(r: &InvariantReport) -> ReportDoc {
    ReportDoc {
        volume: r.volume,
        cs_mod_pi2: r.cs_mod_pi2,
        cs_over_2pi2_mod_half: r.cs_over_2pi2_mod_half,
        beta: r
            .beta
            .terms()
            .iter()
            .map(|(coef, p)| BetaTermDoc {
                z: [p.z.re, p.z.im],
                p: p.p,
                q: p.q,
                coef: *coef,
            })
            .collect(),
        method: r.method.to_string(),
        warnings: r.warnings.clone(),
    }
}

fn print_report_text(r: &InvariantReport) {
    println!("method:              {}", r.method);
    println!("volume:              {:.15e}", r.volume);
    println!("cs (mod pi^2):       {:.15e}", r.cs_mod_pi2);
    println!("cs/(2 pi^2) mod 1/2: {:.15e}", r.cs_over_2pi2_mod_half);
    print!("beta:               ");
    if r.beta.is_empty() {
        println!(" 0");
    } else {
        for (coef, p) in r.beta.terms() {
            print!(
                " {}{}[{:.15e}{:+.15e}i; {}, {}]",
                if *coef >= 0 { "+" } else { "-" },
                coef.abs(),
                p.z.re,
                p.z.im,
                p.p,
                p.q
            );
        }
        println!();
    }
    for w in &r.warnings {
        println!("warning: {w}");
    }
}

fn parse_fill(spec: &str) -> Result<(usize, Filling), Error> {
    let (cusp, rest) = spec
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("--fill wants CUSP=A,B, got '{spec}'")))?;
    let cusp: usize = cusp
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad cusp index in '{spec}'")))?;
    let nums: Vec<i64> = rest
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer in '{spec}'")))
        })
        .collect::<Result<_, _>>()?;
    let filling = match nums.as_slice() {
        [a, b] => Filling::filled(*a, *b)?,
        [a, b, g, d] => Filling::with_frame(*a, *b, *g, *d)?,
        _ => {
            return Err(Error::Parse(format!(
                "--fill wants 2 or 4 integers, got {} in '{spec}'",
                nums.len()
            )))
        }
    };
    Ok((cusp, filling))
}

fn load(input: &str) -> Result<OrderedTriangulation, Error> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Error::Parse(format!("cannot read {input}: {e}")))?;
    parse_tri(&text)
}

fn cmd_invariants(
    input: &str,
    fill: &[String],
    method: &str,
    tol: Option<f64>,
    seed: u64,
    format: &str,
) -> Result<(), Error> {
    let tol = default_tol(tol);
    let tri = load(input)?;
    let mut spec = FillingSpec::complete();
    for f in fill {
        let (cusp, filling) = parse_fill(f)?;
        if cusp >= tri.num_vertices() {
            return Err(Error::Parse(format!(
                "--fill names cusp {cusp}, but the document has vertices 0..{}",
                tri.num_vertices()
            )));
        }
        spec.fillings.push((cusp, filling));
    }
    let mut reports: Vec<InvariantReport> = Vec::new();
    if tri.labels.is_some() {
        if !spec.fillings.is_empty() {
            return Err(Error::Unsupported(
                "Dehn filling applies to unlabeled cusped triangulations".into(),
            ));
        }
        let analysis = analyze_labeled(&tri, seed)?;
        reports.push(analysis.direct);
    } else {
        let analysis = analyze_geometric(&tri, &spec, 32)?;
        match method {
            "direct" => reports.push(analysis.direct),
            "corrected" => reports.push(analysis.corrected.expect("corrected available")),
            _ => {
                let corrected = analysis.corrected.clone().expect("corrected available");
                let agree = analysis.direct.r_beta.congruent(&corrected.r_beta, tol);
                reports.push(analysis.direct);
                reports.push(corrected);
                if !agree {
                    reports.last_mut().unwrap().warnings.push(format!(
                        "direct and corrected reports disagree beyond {tol:e}"
                    ));
                }
            }
        }
    }
    match format {
        "json" => {
            let docs: Vec<ReportDoc> = reports.iter().map(report_doc).collect();
            if docs.len() == 1 {
                println!("{}", serde_json::to_string_pretty(&docs[0]).unwrap());
            } else {
                println!("{}", serde_json::to_string_pretty(&docs).unwrap());
            }
        }
        _ => {
            for (i, r) in reports.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                print_report_text(r);
            }
        }
    }
    Ok(())
}

fn cmd_lens(n: usize, seed: u64, format: &str) -> Result<(), Error> {
    let (_beta, report) = lens_space_class(n, seed)?;
    let expected = PI2 / n as f64;
    let got = report.r_beta.value();
    let residual = {
        let d = (got.re - expected).rem_euclid(PI2);
        d.min(PI2 - d).max(got.im.abs()).max(report.volume.abs())
    };
    match format {
        "json" => {
            #[derive(serde::Serialize)]
            struct LensDoc {
                n: usize,
                r_value_mod_pi2: [f64; 2],
                expected_pi2_over_n: f64,
                residual: f64,
                report: ReportDoc,
            }
            let doc = LensDoc {
                n,
                r_value_mod_pi2: [got.re, got.im],
                expected_pi2_over_n: expected,
                residual,
                report: report_doc(&report),
            };
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        _ => {
            println!("L({n},1): R(beta) = {:.15e} mod pi^2", got.re);
            println!("expected pi^2/{n} = {expected:.15e}");
            println!("residual:          {residual:.3e}");
            print_report_text(&report);
        }
    }
    Ok(())
}

fn cmd_five_term_check(count: usize, seed: u64) -> Result<(), Error> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    let mut disagreements = 0usize;
    for _ in 0..count {
        let (x, y) = sample_ft_plus(&mut rng);
        let b = |r: &mut rand_chacha::ChaCha8Rng| r.gen_range(-3i64..=3);
        let inst = five_term_instance(
            x,
            y,
            b(&mut rng),
            b(&mut rng),
            b(&mut rng),
            b(&mut rng),
            b(&mut rng),
        )?;
        let s = inst.alternating_sum()?;
        let r = r_of_sum(&s);
        let d = r.dist(&extbloch::branchlog::mod_pi2(Complex64::new(0.0, 0.0)));
        max_residual = max_residual.max(d);
        let geometric =
            verify_five_term_geometric(&inst.developing_points(), &inst.flats()?, 1e-9)?;
        if nu_vanishes(&inst) != geometric {
            disagreements += 1;
        }
    }
    println!("instances:              {count}");
    println!("max |sum R| mod pi^2:   {max_residual:.3e}");
    println!("criteria disagreements: {disagreements}");
    if max_residual > 1e-9 || disagreements > 0 {
        return Err(Error::Flattening("five-term property check failed".into()));
    }
    Ok(())
}

fn cmd_pachner(input: &str, move_spec: &str) -> Result<(), Error> {
    let tri = load(input)?;
    if tri.labels.is_some() {
        return Err(Error::Unsupported(
            "pachner command expects an unlabeled cusped triangulation".into(),
        ));
    }
    let before = analyze_geometric(&tri, &FillingSpec::complete(), 32)?;

    let (new_tri, transport) = match move_spec.split_once(':') {
        Some(("23", rest)) => {
            let coords = rest
                .strip_prefix("face=")
                .ok_or_else(|| Error::Parse(format!("want 23:face=T/F, got '{move_spec}'")))?;
            let (t, f) = coords
                .split_once('/')
                .ok_or_else(|| Error::Parse(format!("want 23:face=T/F, got '{move_spec}'")))?;
            let t: usize = t
                .parse()
                .map_err(|_| Error::Parse("bad tet index".into()))?;
            let f: usize = f
                .parse()
                .map_err(|_| Error::Parse("bad face index".into()))?;
            pachner_23(&tri, t, f)?
        }
        Some(("32", rest)) => {
            let e = rest
                .strip_prefix("edge=")
                .ok_or_else(|| Error::Parse(format!("want 32:edge=E, got '{move_spec}'")))?;
            let e: usize = e
                .parse()
                .map_err(|_| Error::Parse("bad edge index".into()))?;
            pachner_32(&tri, e)?
        }
        _ => {
            return Err(Error::Parse(format!(
                "move spec '{move_spec}' is not 23:face=T/F or 32:edge=E"
            )))
        }
    };

    let new_z = transport.transport(&before.complete_shapes.z)?;
    let report_after = report_for_shapes(&new_tri, &new_z)?;
    let delta = before.direct.r_beta.dist(&report_after.r_beta);
    println!("tets: {} -> {}", tri.num_tets(), new_tri.num_tets());
    println!(
        "R(beta) before: {:.15e} {:+.15e}i",
        before.direct.r_beta.value().re,
        before.direct.r_beta.value().im
    );
    println!(
        "R(beta) after:  {:.15e} {:+.15e}i",
        report_after.r_beta.value().re,
        report_after.r_beta.value().im
    );
    println!("invariant delta mod pi^2: {delta:.3e}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Invariants {
            input,
            fill,
            method,
            tol,
            seed,
            format,
        } => cmd_invariants(input, fill, method, *tol, *seed, format),
        Command::Lens { n, seed, format } => cmd_lens(*n, *seed, format),
        Command::FiveTermCheck { count, seed } => cmd_five_term_check(*count, *seed),
        Command::Pachner {
            input,
            move_spec,
            seed: _,
        } => cmd_pachner(input, move_spec),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
