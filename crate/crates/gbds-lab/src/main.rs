//! File-based front end: parse system descriptions, dispatch constructions
//! and verifications, and render reports as text, JSON, or DOT.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use gbds_lab::algebra::{Algebra, IntRing, ModRing, Ring};
use gbds_lab::constructions::desing::{check_embedding_conditions, desingularize, FLetter};
use gbds_lab::constructions::lattice::admissible_pairs;
use gbds_lab::constructions::tilde::tilde_system;
use gbds_lab::document::{read_labelled_space, read_system, SystemDocument};
use gbds_lab::expr;
use gbds_lab::report::{Check, Report};
use gbds_lab::semigroup::enumerate_elements;
use gbds_lab::stone::stone_graph;
use gbds_lab::system::DynamicalSystem;
use gbds_lab::verify::{run_all, SuiteOptions};

#[derive(Parser)]
#[command(
    name = "gbds-lab",
    version,
    about = "Finite generalized Boolean dynamical systems workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(clap::Args)]
struct Common {
    /// Path to a system description (JSON).
    #[arg(long)]
    system: PathBuf,
    /// Word-length bound for enumerations and bounded checks.
    #[arg(long, default_value_t = 6)]
    bound: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a system description and check every axiom.
    Validate(Common),
    /// Summarize a system: atoms, dynamics, ideals, classification.
    Info(Common),
    /// Enumerate the inverse semigroup and check its laws.
    Semigroup(Common),
    /// Evaluate an expression in the system's algebra, or summarize it.
    Algebra {
        #[command(flatten)]
        common: Common,
        /// Expression such as "S{a,[v2]}*s{a,[v2]}".
        #[arg(long)]
        expr: Option<String>,
        /// Coefficient ring: "int" or "mod:m".
        #[arg(long, default_value = "int")]
        ring: String,
    },
    /// Build the associated non-relative system on pairs.
    Tilde(Common),
    /// List the admissible ideal pairs and their lattice.
    Ideals(Common),
    /// Desingularize and verify the semigroup embedding.
    Desingularize(Common),
    /// Build the dual labelled graph.
    Stone(Common),
    /// Rebuild a system from a labelled-space description.
    FromLabelled(Common),
    /// Run the full invariant suite against the system.
    Verify(Common),
}

/// A user-facing failure: message plus the contract exit code
/// (1 = input error, 2 = verification counterexample).
struct Failure {
    message: String,
    code: u8,
}

fn input_error(e: impl std::fmt::Display) -> Failure {
    Failure {
        message: e.to_string(),
        code: 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(common: &Common) -> Result<DynamicalSystem, Failure> {
    read_system(&common.system).map_err(input_error)
}

fn no_dot(common: &Common) -> Result<(), Failure> {
    if common.format == Format::Dot {
        Err(input_error("dot output is only available for `stone`"))
    } else {
        Ok(())
    }
}

/// Renders a report and maps "some check failed" to exit code 2.
fn finish(report: Report, common: &Common) -> Result<(), Failure> {
    let text = match common.format {
        Format::Json => report.render_json(),
        _ => report.render_text(),
    };
    println!("{text}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure {
            message: "verification found a counterexample".into(),
            code: 2,
        })
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate(c) => {
            no_dot(&c)?;
            let start = Instant::now();
            let sys = load(&c)?;
            let check = Check::pass(
                "validate",
                format!(
                    "{} atoms, {} letters, {}",
                    sys.gba().atoms().len(),
                    sys.alphabet().len(),
                    if sys.is_non_relative() {
                        "non-relative"
                    } else {
                        "relative"
                    }
                ),
            );
            finish(
                Report::new("validate", vec![check], start.elapsed().as_millis()),
                &c,
            )
        }
        Command::Info(c) => {
            no_dot(&c)?;
            let sys = load(&c)?;
            if c.format == Format::Json {
                let doc = SystemDocument::from_system(&sys);
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).map_err(input_error)?
                );
            } else {
                println!("{}", info_text(&sys));
            }
            Ok(())
        }
        Command::Semigroup(c) => {
            no_dot(&c)?;
            let start = Instant::now();
            let sys = load(&c)?;
            let els = enumerate_elements(&sys, c.bound);
            let idems = els.iter().filter(|e| e.is_idempotent()).count();
            let mut checks = vec![Check::pass(
                "enumerate",
                format!(
                    "{} nonzero elements, {} idempotents at bound {}",
                    els.len(),
                    idems,
                    c.bound
                ),
            )];
            let opts = SuiteOptions {
                bound: c.bound,
                ..SuiteOptions::default()
            };
            checks.push(gbds_lab::verify::check_semigroup_laws(&sys, &opts));
            checks.push(gbds_lab::verify::check_e_unitary(&sys, &opts));
            finish(
                Report::new("semigroup", checks, start.elapsed().as_millis()),
                &c,
            )
        }
        Command::Algebra {
            common: c,
            expr: e,
            ring,
        } => {
            no_dot(&c)?;
            let sys = load(&c)?;
            match parse_ring(&ring)? {
                RingChoice::Int => algebra_command(&sys, IntRing, e.as_deref(), &c),
                RingChoice::Mod(m) => algebra_command(&sys, ModRing(m), e.as_deref(), &c),
            }
        }
        Command::Tilde(c) => {
            no_dot(&c)?;
            let sys = load(&c)?;
            let tilde = tilde_system(&sys).map_err(input_error)?;
            if c.format == Format::Json {
                let doc = SystemDocument::from_system(&tilde.system);
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).map_err(input_error)?
                );
            } else {
                let g = tilde.system.gba();
                println!(
                    "tilde system: {} members, {} atoms, {} regular atoms",
                    g.members().len(),
                    g.atoms().len(),
                    g.atoms()
                        .iter()
                        .filter(|&&a| tilde.system.b_reg().contains(a))
                        .count()
                );
                println!("{}", info_text(&tilde.system));
            }
            Ok(())
        }
        Command::Ideals(c) => {
            no_dot(&c)?;
            let sys = load(&c)?;
            let pairs = admissible_pairs(&sys).map_err(input_error)?;
            if c.format == Format::Json {
                let rows: Vec<serde_json::Value> = pairs
                    .iter()
                    .map(|p| {
                        serde_json::json!({
                            "H": sys.gba().render(p.h.max()),
                            "S": sys.gba().render(p.s.max()),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&rows).map_err(input_error)?
                );
            } else {
                println!("{} admissible pairs (H, S):", pairs.len());
                for p in &pairs {
                    println!(
                        "  H = {}, S = {}, quotient atoms = {}",
                        sys.gba().render(p.h.max()),
                        sys.gba().render(p.s.max()),
                        p.quotient.gba().atoms().len()
                    );
                }
            }
            Ok(())
        }
        Command::Desingularize(c) => {
            no_dot(&c)?;
            let start = Instant::now();
            let sys = load(&c)?;
            let desing = desingularize(&sys).map_err(input_error)?;
            let n = sys.alphabet().len();
            let chain = desing
                .x_max()
                .iter()
                .map(|&m| sys.gba().render(m))
                .collect::<Vec<_>>()
                .join(" ⊆ ");
            let mut checks = vec![Check::pass(
                "x-chain",
                format!("max(X_i) for i = 0..={}: {chain}", n + 1),
            )];
            match desing.certify_regularity(n + 3) {
                Ok(certs) => checks.push(Check::pass(
                    "regularity",
                    format!("{} certificates up to level {}", certs.len(), n + 3),
                )),
                Err(e) => checks.push(Check::fail("regularity", e.to_string())),
            }
            match check_embedding_conditions(&sys, c.bound) {
                Ok(r) => checks.push(Check::from_counterexamples(
                    "embedding",
                    r.morphism_pairs
                        + r.membership_checked
                        + r.cover_checked
                        + r.tightness_checked
                        + r.sandwich_checked,
                    &r.counterexamples,
                )),
                Err(e) => checks.push(Check::fail("embedding", e.to_string())),
            }
            if c.format == Format::Text {
                for l in 0..=n + 1 {
                    let members = desing.level_members(l);
                    if !members.is_empty() {
                        let rendered: Vec<String> =
                            members.iter().map(|&m| sys.gba().render(m)).collect();
                        println!("level {l}: {}", rendered.join(", "));
                    }
                }
                let letters: Vec<String> = (0..n)
                    .map(|j| format!("{:?}", FLetter::Base(j)))
                    .chain((1..=n + 1).map(|i| format!("{:?}", FLetter::B(i))))
                    .collect();
                println!("letters: {}", letters.join(", "));
            }
            finish(
                Report::new("desingularize", checks, start.elapsed().as_millis()),
                &c,
            )
        }
        Command::Stone(c) => {
            let sys = load(&c)?;
            let space = stone_graph(&sys).map_err(input_error)?;
            match c.format {
                Format::Dot => println!("{}", space.to_dot()),
                Format::Json => {
                    let edges: Vec<serde_json::Value> = space
                        .edges()
                        .iter()
                        .map(|&(s, t, l)| {
                            serde_json::json!([
                                space.vertex_names()[s],
                                space.labels()[l],
                                space.vertex_names()[t]
                            ])
                        })
                        .collect();
                    let doc = serde_json::json!({
                        "vertices": space.vertex_names(),
                        "labels": space.labels(),
                        "edges": edges,
                    });
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&doc).map_err(input_error)?
                    );
                }
                Format::Text => {
                    println!(
                        "{} vertices, {} edges",
                        space.vertex_names().len(),
                        space.edges().len()
                    );
                    for &(s, t, l) in space.edges() {
                        println!(
                            "  {} --{}--> {}",
                            space.vertex_names()[s],
                            space.labels()[l],
                            space.vertex_names()[t]
                        );
                    }
                }
            }
            Ok(())
        }
        Command::FromLabelled(c) => {
            no_dot(&c)?;
            let space = read_labelled_space(&c.system).map_err(input_error)?;
            let sys = gbds_lab::stone::labelled_to_gbds(&space).map_err(input_error)?;
            let doc = SystemDocument::from_system(&sys);
            if c.format == Format::Json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).map_err(input_error)?
                );
            } else {
                println!("{}", info_text(&sys));
            }
            Ok(())
        }
        Command::Verify(c) => {
            no_dot(&c)?;
            let start = Instant::now();
            let sys = load(&c)?;
            let opts = SuiteOptions {
                bound: c.bound,
                ..SuiteOptions::default()
            };
            let checks = run_all(&sys, &opts);
            finish(
                Report::new("verify", checks, start.elapsed().as_millis()),
                &c,
            )
        }
    }
}

enum RingChoice {
    Int,
    Mod(u64),
}

fn parse_ring(s: &str) -> Result<RingChoice, Failure> {
    if s == "int" {
        Ok(RingChoice::Int)
    } else if let Some(m) = s.strip_prefix("mod:") {
        let m: u64 = m
            .parse()
            .map_err(|_| input_error(format!("invalid modulus in --ring {s}")))?;
        if m < 2 {
            return Err(input_error("modulus must be at least 2"));
        }
        Ok(RingChoice::Mod(m))
    } else {
        Err(input_error(format!(
            "unknown ring {s:?}; use \"int\" or \"mod:m\""
        )))
    }
}

fn algebra_command<R: Ring>(
    sys: &DynamicalSystem,
    ring: R,
    e: Option<&str>,
    c: &Common,
) -> Result<(), Failure>
where
    R::Elem: std::fmt::Display,
{
    let alg = Algebra::new(sys, ring);
    if let Some(src) = e {
        let value = expr::parse(&alg, src).map_err(input_error)?;
        let rendered = expr::render(&alg, &value);
        if c.format == Format::Json {
            println!(
                "{}",
                serde_json::json!({ "expr": src, "normal_form": rendered })
            );
        } else {
            println!("{rendered}");
        }
        return Ok(());
    }
    let (ann, perp) = alg.ann_basis().map_err(input_error)?;
    let render_basis = |b: &[gbds_lab::algebra::Monomial]| -> Vec<String> {
        b.iter().map(|m| expr::render_monomial(sys, m)).collect()
    };
    if c.format == Format::Json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "annihilator_basis": render_basis(&ann),
                "complement_basis": render_basis(&perp),
            }))
            .map_err(input_error)?
        );
    } else {
        println!("annihilator basis ({}):", ann.len());
        for m in render_basis(&ann) {
            println!("  {m}");
        }
        println!("complement basis ({}):", perp.len());
        for m in render_basis(&perp) {
            println!("  {m}");
        }
    }
    Ok(())
}

fn info_text(sys: &DynamicalSystem) -> String {
    let g = sys.gba();
    let mut out = String::new();
    let atoms: Vec<String> = g.atoms().iter().map(|&a| g.render(a)).collect();
    out.push_str(&format!(
        "atoms ({}): {}\nmembers: {}\nalphabet: {}\n",
        atoms.len(),
        atoms.join(", "),
        g.members().len(),
        sys.alphabet().join(", ")
    ));
    for (j, name) in sys.alphabet().iter().enumerate() {
        let images: Vec<String> = g
            .atoms()
            .iter()
            .map(|&a| format!("{} ↦ {}", g.render(a), g.render(sys.theta(j).apply(a))))
            .collect();
        out.push_str(&format!(
            "θ_{name}: {}\n  I_{name} max = {}, F_{name} max = {}\n",
            images.join(", "),
            g.render(sys.ideal(j).max()),
            g.render(sys.f_ideal(j).max())
        ));
    }
    out.push_str(&format!(
        "B_reg max = {}\nB_sink max = {}\nJ max = {} ({})",
        g.render(sys.b_reg().max()),
        g.render(sys.b_sink().max()),
        g.render(sys.j().max()),
        if sys.is_non_relative() {
            "non-relative"
        } else {
            "relative"
        }
    ));
    out
}
