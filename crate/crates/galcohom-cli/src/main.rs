//! Command-line front end: run the global-cohomology pipeline on datum
//! files, reproduce the built-in examples, and emit text or JSON reports.

mod report;

use clap::{Parser, Subcommand, ValueEnum};
use galcohom::abelian::FinAbGroup;
use galcohom::datum::{
    builder_paper_example, builder_sansuc_torus, parse_datum, validate_datum, ArithmeticDatum,
};
use galcohom::group::FiniteGroup;
use galcohom::h1::{f1_s, f2_s, h1_global, GlobalContext};
use galcohom::hinich::hinich_sequence;
use galcohom::local::{local_h1_nonarch, local_h2_nonarch, local_real};
use galcohom::lowdeg::ShortExact;
use galcohom::places::{induced_module, PlaceKind};
use galcohom::sha::{sha1, sha2, sha_not_summand_degree1, sha_not_summand_degree2};
use galcohom::tate::tate_cohomology;
use num_bigint::BigInt;
use report::Report;
use sha2 as sha2_digest;
use sha2_digest::Digest;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "galcohom", version, about = "Exact Tate and global Galois cohomology of arithmetic data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Resolution depth window |n| <= depth
    #[arg(long, global = true, default_value_t = 4)]
    depth: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Structural validation: coverage per cyclic class, archimedean data
    Validate(Input),
    /// Tate cohomology H^n of the datum's module
    Tate {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// The nine-term homology window of 0 → M[S]₀ → M[S] → M → 0
    Hinich(Input),
    /// Sha¹ by kernel and cokernel formulas, with cross-check
    Sha1 {
        #[command(flatten)]
        input: Input,
        /// dual-formula cross-check (on by default)
        #[arg(long, default_value_t = true)]
        check: bool,
    },
    /// Sha² by kernel and cokernel formulas, with cross-check
    Sha2 {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = true)]
        check: bool,
    },
    /// Structured global H¹ (core + residual classes)
    H1(Input),
    /// H¹_ab as F¹_S plus residual summands
    H1ab(Input),
    /// H²_ab as F²_S plus residual summands
    H2ab(Input),
    /// Local values at every orbit of the datum
    Local(Input),
    /// Built-in examples
    Example {
        /// paper-8.6 | sansuc
        name: String,
        /// subcommand to run on the built datum (default: full pipeline)
        #[arg(long)]
        run: Option<String>,
        /// group for sansuc: klein | z4 | z6 | z2xz4
        #[arg(long)]
        group: Option<String>,
        /// comma-separated generator labels (or 'full') for sansuc classes
        #[arg(long)]
        classes: Option<String>,
    },
}

#[derive(clap::Args)]
struct Input {
    /// Datum file
    #[arg(long)]
    datum: Option<PathBuf>,
    /// Run on every .json file in a directory, with a summary table
    #[arg(long)]
    all: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let format = cli.format;
    let depth = cli.depth;
    match &cli.command {
        Command::Validate(input) => dispatch(input, format, "validate", depth, cmd_validate),
        Command::Tate { input, degree } => {
            let d = *degree;
            dispatch(input, format, "tate", depth, move |dat, rep, dep| cmd_tate(dat, rep, dep, d))
        }
        Command::Hinich(input) => dispatch(input, format, "hinich", depth, cmd_hinich),
        Command::Sha1 { input, check } => {
            let c = *check;
            dispatch(input, format, "sha1", depth, move |dat, rep, dep| cmd_sha1(dat, rep, dep, c))
        }
        Command::Sha2 { input, check } => {
            let c = *check;
            dispatch(input, format, "sha2", depth, move |dat, rep, dep| cmd_sha2(dat, rep, dep, c))
        }
        Command::H1(input) => dispatch(input, format, "h1", depth, cmd_h1),
        Command::H1ab(input) => dispatch(input, format, "h1ab", depth, cmd_h1ab),
        Command::H2ab(input) => dispatch(input, format, "h2ab", depth, cmd_h2ab),
        Command::Local(input) => dispatch(input, format, "local", depth, cmd_local),
        Command::Example { name, run, group, classes } => {
            cmd_example(name, run.as_deref(), group.as_deref(), classes.as_deref(), format, depth)
        }
    }
}

/// Run a per-datum command on one file or on a directory of files.
fn dispatch<F>(input: &Input, format: Format, name: &str, depth: i64, f: F) -> i32
where
    F: Fn(&ArithmeticDatum, &mut Report, i64) -> Result<(), galcohom::Error> + Send + Sync + Copy,
{
    match (&input.datum, &input.all) {
        (Some(file), None) => run_one(file, format, name, depth, f),
        (None, Some(dir)) => run_all(dir, format, name, depth, f),
        _ => {
            eprintln!("error: exactly one of --datum <file> or --all <dir> is required");
            2
        }
    }
}

fn run_one<F>(file: &Path, format: Format, name: &str, depth: i64, f: F) -> i32
where
    F: Fn(&ArithmeticDatum, &mut Report, i64) -> Result<(), galcohom::Error>,
{
    let start = Instant::now();
    let mut rep = Report::new(name);
    rep.input = Some(file.display().to_string());
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {}", file.display(), e);
            return 2;
        }
    };
    rep.input_digest = Some(digest(&text));
    let code = match parse_datum(&text).and_then(|d| f(&d, &mut rep, depth)) {
        Ok(()) => 0,
        Err(e) => {
            rep.block("error").line(e.to_string());
            1
        }
    };
    rep.elapsed_ms = start.elapsed().as_millis();
    print_report(&rep, format);
    code
}

fn run_all<F>(dir: &Path, format: Format, name: &str, depth: i64, f: F) -> i32
where
    F: Fn(&ArithmeticDatum, &mut Report, i64) -> Result<(), galcohom::Error> + Send + Sync + Copy,
{
    let mut files: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
            .collect(),
        Err(e) => {
            eprintln!("error: cannot read directory {}: {}", dir.display(), e);
            return 2;
        }
    };
    files.sort();
    let results: Vec<(PathBuf, Report, i32)> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|file| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let mut rep = Report::new(name);
                    rep.input = Some(file.display().to_string());
                    let code = match std::fs::read_to_string(file) {
                        Ok(text) => {
                            rep.input_digest = Some(digest(&text));
                            match parse_datum(&text).and_then(|d| f(&d, &mut rep, depth)) {
                                Ok(()) => 0,
                                Err(e) => {
                                    rep.block("error").line(e.to_string());
                                    1
                                }
                            }
                        }
                        Err(e) => {
                            rep.block("error").line(e.to_string());
                            2
                        }
                    };
                    rep.elapsed_ms = start.elapsed().as_millis();
                    (file.clone(), rep, code)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker thread")).collect()
    });
    let mut worst = 0;
    match format {
        Format::Json => {
            let arr: Vec<&Report> = results.iter().map(|(_, r, _)| r).collect();
            println!("{}", serde_json::to_string_pretty(&arr).unwrap());
        }
        Format::Text => {
            println!("summary ({} files):", results.len());
            for (file, rep, code) in &results {
                let status = if *code == 0 { "ok" } else { "FAIL" };
                let brief: Vec<&str> = rep
                    .blocks
                    .iter()
                    .flat_map(|b| b.lines.first().map(|s| s.as_str()))
                    .collect();
                println!("  {:<40} {:<4} {}", file.display(), status, brief.join(" | "));
            }
        }
    }
    for (_, _, code) in &results {
        worst = worst.max(*code);
    }
    worst
}

fn digest(text: &str) -> String {
    let mut hasher = sha2_digest::Sha256::new();
    hasher.update(text.as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}

fn print_report(rep: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", rep.render_text()),
        Format::Json => print!("{}", rep.render_json()),
    }
}

fn group_str(g: &FinAbGroup) -> String {
    g.to_string()
}

/// Canonical generator names: η subscripted by the invariant factor, with
/// letter suffixes for repeats; free generators are named ζ.
fn generator_names(g: &FinAbGroup) -> Vec<String> {
    let mut names = Vec::new();
    let mut counts: std::collections::BTreeMap<String, usize> = Default::default();
    let gens = g.canonical_generators();
    for (f, _) in &gens {
        let base = if f == &BigInt::from(0) { "ζ".to_string() } else { format!("η{}", f) };
        *counts.entry(base).or_insert(0) += 1;
    }
    let mut seen: std::collections::BTreeMap<String, usize> = Default::default();
    for (f, _) in &gens {
        let base = if f == &BigInt::from(0) { "ζ".to_string() } else { format!("η{}", f) };
        let k = seen.entry(base.clone()).or_insert(0);
        let name = if counts[&base] > 1 {
            format!("{}{}", base, (b'a' + *k as u8) as char)
        } else {
            base
        };
        *k += 1;
        names.push(name);
    }
    names
}

fn element_str(g: &FinAbGroup, coords: &[BigInt]) -> String {
    let names = generator_names(g);
    let cc = g.canonical_coords(coords);
    let terms: Vec<String> = cc
        .iter()
        .zip(&names)
        .filter(|(c, _)| !num_traits::Zero::is_zero(*c))
        .map(|(c, n)| {
            if c == &BigInt::from(1) { n.clone() } else { format!("{}·{}", c, n) }
        })
        .collect();
    if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
}

fn cmd_validate(d: &ArithmeticDatum, rep: &mut Report, _depth: i64) -> Result<(), galcohom::Error> {
    let v = validate_datum(d);
    let b = rep.block("coverage");
    for (cls, orbits) in &v.coverage {
        if orbits.is_empty() {
            b.line(format!("{}: UNCOVERED", cls));
        } else {
            b.line(format!("{}: covered by {}", cls, orbits.join(", ")));
        }
    }
    b.datum("covered", serde_json::json!(v.covered()));
    if let Some(phi) = &v.phi_witness {
        rep.block("phi").line(format!(
            "witness φ: classes map to places {:?}",
            phi.image_of_base
        ));
    }
    for m in &v.arch_messages {
        rep.block("archimedean").line(m.clone());
    }
    if !v.covered() {
        return Err(galcohom::Error::Uncovered(
            v.uncovered.first().cloned().unwrap_or_else(|| "empty place set".into()),
        ));
    }
    Ok(())
}

fn cmd_tate(d: &ArithmeticDatum, rep: &mut Report, depth: i64, degree: i64) -> Result<(), galcohom::Error> {
    let h = tate_cohomology(&d.module, degree, depth)?;
    rep.block("tate")
        .line(format!("H^{}(Γ, M) = {}", degree, group_str(h.group())))
        .datum("degree", serde_json::json!(degree))
        .datum(
            "invariant_factors",
            serde_json::json!(h.group().invariant_factors().iter().map(|f| f.to_string()).collect::<Vec<_>>()),
        );
    Ok(())
}

fn cmd_hinich(d: &ArithmeticDatum, rep: &mut Report, depth: i64) -> Result<(), galcohom::Error> {
    let ind = induced_module(&d.module, &d.places)?;
    let ses = ShortExact::new(
        ind.ms0.clone(),
        ind.ms.clone(),
        d.module.clone(),
        ind.inclusion0.clone(),
        ind.augmentation.clone(),
    )?;
    let h = hinich_sequence(&ses, depth)?;
    let b = rep.block("sequence");
    b.line(format!(
        "H1: {} → {} → {}",
        h.h1[0], h.h1[1], h.h1[2]
    ));
    b.line(format!("torsion: {} → {} → {}", h.tors[0], h.tors[1], h.tors[2]));
    b.line(format!("Q/Z ranks: {} → {} → {}", h.qz[0], h.qz[1], h.qz[2]));
    let e = rep.block("exactness");
    for (node, ok) in &h.exactness {
        e.line(format!("{}: {}", node, if *ok { "exact" } else { "NOT EXACT" }));
    }
    e.datum("exact", serde_json::json!(h.is_exact()));
    if !h.is_exact() {
        return Err(galcohom::Error::NotExact("nine-term window".into()));
    }
    Ok(())
}

fn cmd_sha1(d: &ArithmeticDatum, rep: &mut Report, depth: i64, check: bool) -> Result<(), galcohom::Error> {
    let ctx = GlobalContext::new(d)?;
    let s = sha1(d, &ctx, depth)?;
    let gens: Vec<String> =
        s.generators.iter().map(|g| element_str(&ctx.co0, g)).collect();
    let line = if s.is_trivial() {
        "Sha¹ = 0".to_string()
    } else {
        format!(
            "Sha¹ ≅ {}, generator {}, cross-check: {}",
            s.group,
            gens.join(", "),
            if s.cross_check() { "OK" } else { "MISMATCH" }
        )
    };
    rep.block("sha1")
        .line(line)
        .datum("kernel_factors", serde_json::json!(fstr(&s.kernel_factors)))
        .datum("cokernel_factors", serde_json::json!(fstr(&s.cokernel_factors)))
        .datum("generators", serde_json::json!(gens));
    if check && !s.cross_check() {
        return Err(galcohom::Error::NotExact("Sha¹ dual formulas disagree".into()));
    }
    if !s.is_trivial() {
        if let Ok(ns) = sha_not_summand_degree1(d, &ctx, &s) {
            let b = rep.block("summand");
            match &ns.verdict {
                galcohom::abelian::SummandVerdict::Summand { .. } => {
                    b.line("Sha¹ is a direct summand of the finite core".to_string());
                }
                galcohom::abelian::SummandVerdict::NotSummand { certificate } => {
                    match certificate {
                        Some(c) => b.line(format!(
                            "not a direct summand: certificate p = {}, b = {}",
                            c.prime,
                            element_str(&ns.core, &c.witness)
                        )),
                        None => b.line("not a direct summand (no divisibility certificate)".to_string()),
                    };
                }
            }
        }
    }
    Ok(())
}

fn cmd_sha2(d: &ArithmeticDatum, rep: &mut Report, _depth: i64, check: bool) -> Result<(), galcohom::Error> {
    let ctx = GlobalContext::new(d)?;
    let s = sha2(d, &ctx)?;
    let mut line = if s.is_trivial() {
        "Sha² = 0".to_string()
    } else {
        format!(
            "Sha² ≅ {}, cross-check: {}",
            s.group,
            if s.cross_check() { "OK" } else { "MISMATCH" }
        )
    };
    if let Some(p) = &d.predicted_sha2_order {
        let actual = s.group.order().unwrap_or_default();
        line.push_str(&format!(
            " (predicted n/l = {}): {}",
            p,
            if &actual == p { "match" } else { "MISMATCH" }
        ));
    }
    rep.block("sha2")
        .line(line)
        .datum("kernel_factors", serde_json::json!(fstr(&s.kernel_factors)))
        .datum("cokernel_factors", serde_json::json!(fstr(&s.cokernel_factors)));
    if check && !s.cross_check() {
        return Err(galcohom::Error::NotExact("Sha² dual formulas disagree".into()));
    }
    if let Some(p) = &d.predicted_sha2_order {
        if s.group.order().as_ref() != Some(p) {
            return Err(galcohom::Error::NotExact("Sha² does not match the predicted order".into()));
        }
    }
    if !s.is_trivial() {
        if let Ok(cert) = sha_not_summand_degree2(d, &ctx, &s) {
            rep.block("summand").line(format!(
                "not a direct summand: divisibility certificate at p = {}",
                cert.prime
            ));
        }
    }
    Ok(())
}

fn cmd_h1(d: &ArithmeticDatum, rep: &mut Report, _depth: i64) -> Result<(), galcohom::Error> {
    let ctx = GlobalContext::new(d)?;
    let h = h1_global(d, &ctx)?;
    let b = rep.block("core");
    b.line(format!("core size: {}", h.core.size()));
    if let Some((g, _)) = &h.core.group {
        b.line(format!("core group: {}", g));
        b.datum("core_factors", serde_json::json!(fstr(&g.invariant_factors())));
    } else {
        b.line("core is a pointed set (user-supplied archimedean data)".to_string());
    }
    b.datum("core_size", serde_json::json!(h.core.size()));
    let r = rep.block("residual (one copy per place outside S)");
    for res in &h.residual {
        r.line(format!("class {} ↦ {}", res.class, res.h1));
    }
    Ok(())
}

fn cmd_h1ab(d: &ArithmeticDatum, rep: &mut Report, _depth: i64) -> Result<(), galcohom::Error> {
    let ctx = GlobalContext::new(d)?;
    let f = f1_s(d, &ctx)?;
    let b = rep.block("H1_ab");
    match &f.group {
        Some((g, _)) => {
            b.line(format!("F¹_S = {}", g));
            b.datum("f1s_factors", serde_json::json!(fstr(&g.invariant_factors())));
        }
        None => {
            b.line(format!("F¹_S core size {}", f.size()));
        }
    }
    let r = rep.block("residual (one copy per place outside S)");
    for res in galcohom::h1::residual_descriptors(d) {
        r.line(format!("class {} ↦ {}", res.class, res.h1));
    }
    Ok(())
}

fn cmd_h2ab(d: &ArithmeticDatum, rep: &mut Report, _depth: i64) -> Result<(), galcohom::Error> {
    let ctx = GlobalContext::new(d)?;
    let f = f2_s(d, &ctx)?;
    rep.block("H2_ab")
        .line(format!(
            "F²_S: divisible rank {}, finite part {}",
            f.divisible_rank, f.finite
        ))
        .datum("divisible_rank", serde_json::json!(f.divisible_rank))
        .datum("finite_factors", serde_json::json!(fstr(&f.finite.invariant_factors())));
    let r = rep.block("residual (one copy per place outside S)");
    for res in &f.residual {
        r.line(format!("class {} ↦ (Q/Z)^{}", res.class, res.h2_divisible_rank));
    }
    Ok(())
}

fn cmd_local(d: &ArithmeticDatum, rep: &mut Report, depth: i64) -> Result<(), galcohom::Error> {
    for o in d.places.orbits() {
        let m = d.module.restrict(o.stabilizer());
        let b = rep.block(&format!("place {}", o.label));
        match o.kind {
            PlaceKind::Finite => {
                let (h1, _) = local_h1_nonarch(&m);
                let h2 = local_h2_nonarch(&m);
                b.line(format!("H¹(F_v, G) = {}", h1));
                b.line(format!("H²_ab(F_v, G) = {}", h2));
            }
            PlaceKind::Real => {
                let h1 = local_real(&d.module, o.stabilizer(), 1, depth)?;
                let h2 = local_real(&d.module, o.stabilizer(), 2, depth)?;
                b.line(format!("H¹(R, T•) = {}", h1.group()));
                b.line(format!("H²(R, T•) = {}", h2.group()));
            }
            PlaceKind::Complex => {
                b.line("complex place: trivial in every degree".to_string());
            }
        }
    }
    Ok(())
}

fn fstr(fs: &[BigInt]) -> Vec<String> {
    fs.iter().map(|f| f.to_string()).collect()
}

fn sansuc_group(name: &str) -> Option<Arc<FiniteGroup>> {
    match name {
        "klein" => {
            let table = vec![
                vec![0, 1, 2, 3],
                vec![1, 0, 3, 2],
                vec![2, 3, 0, 1],
                vec![3, 2, 1, 0],
            ];
            let labels = vec!["1".into(), "a".into(), "b".into(), "ab".into()];
            Some(Arc::new(FiniteGroup::from_table(table, Some(labels)).unwrap()))
        }
        "z4" => Some(FiniteGroup::cyclic(4)),
        "z6" => Some(FiniteGroup::cyclic(6)),
        "z2xz4" => Some(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4))),
        _ => None,
    }
}

fn cmd_example(
    name: &str,
    run: Option<&str>,
    group: Option<&str>,
    classes: Option<&str>,
    format: Format,
    depth: i64,
) -> i32 {
    let start = Instant::now();
    let datum = match name {
        "paper-8.6" => builder_paper_example(),
        "sansuc" => {
            let Some(gname) = group else {
                eprintln!("error: sansuc example requires --group");
                return 2;
            };
            let Some(g) = sansuc_group(gname) else {
                eprintln!("error: unknown group '{}'", gname);
                return 2;
            };
            let mut subs = Vec::new();
            for token in classes.unwrap_or("").split(',').filter(|t| !t.is_empty()) {
                if token == "full" {
                    subs.push(g.full_subgroup());
                } else if let Some(e) = g.element_by_label(token) {
                    subs.push(g.generated_subgroup(&[e]));
                } else {
                    eprintln!("error: unknown class generator '{}'", token);
                    return 2;
                }
            }
            builder_sansuc_torus(g, &subs)
        }
        other => {
            eprintln!("error: unknown example '{}'", other);
            return 2;
        }
    };
    let mut rep = Report::new(&format!("example {}", name));
    rep.input_digest = Some(digest(&galcohom::datum::serialize_datum(&datum)));
    let steps: Vec<&str> = match run {
        Some(r) => vec![r],
        None => vec!["validate", "sha1", "sha2", "h1"],
    };
    let mut code = 0;
    for step in steps {
        let r = match step {
            "validate" => cmd_validate(&datum, &mut rep, depth),
            "sha1" => cmd_sha1(&datum, &mut rep, depth, true),
            "sha2" => cmd_sha2(&datum, &mut rep, depth, true),
            "h1" => cmd_h1(&datum, &mut rep, depth),
            "h1ab" => cmd_h1ab(&datum, &mut rep, depth),
            "h2ab" => cmd_h2ab(&datum, &mut rep, depth),
            "local" => cmd_local(&datum, &mut rep, depth),
            "hinich" => cmd_hinich(&datum, &mut rep, depth),
            other => {
                eprintln!("error: unknown step '{}'", other);
                return 2;
            }
        };
        if let Err(e) = r {
            rep.block("error").line(e.to_string());
            code = 1;
            break;
        }
    }
    rep.elapsed_ms = start.elapsed().as_millis();
    print_report(&rep, format);
    code
}
