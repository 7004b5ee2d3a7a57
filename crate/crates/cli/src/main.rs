use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qtnc_core::harness::{self, Check, Universe, DEFAULT_SAMPLES, DEFAULT_SEED};
use qtnc_core::kernel::{self, StarTemplate};
use qtnc_core::report::Report;
use qtnc_core::univalence::{self, Fact, Fibration};
use qtnc_core::vobj::{self, Label, VObj};
use qtnc_core::{Error, Node, Obj};

#[derive(Parser)]
#[command(name = "qtnc", version, about = "Decide arrows, build objects and run model-structure checks on families of subsets of ℕ")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelArg {
    Arrow,
    Star,
    W,
    F,
    C,
}

impl LabelArg {
    fn name(self) -> &'static str {
        match self {
            LabelArg::Arrow => "arrow",
            LabelArg::Star => "star",
            LabelArg::W => "w",
            LabelArg::F => "f",
            LabelArg::C => "c",
        }
    }
}

impl From<LabelArg> for Label {
    fn from(l: LabelArg) -> Self {
        match l {
            LabelArg::Arrow => Label::Arrow,
            LabelArg::Star => Label::Star,
            LabelArg::W => Label::W,
            LabelArg::F => Label::F,
            LabelArg::C => Label::C,
        }
    }
}

#[derive(clap::Args)]
struct UniverseArgs {
    /// Support window: members live in `{0..window-1}` plus cofinite tails.
    #[arg(long)]
    window: Option<u32>,
    /// Number of seeded samples; 0 enumerates every object.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Allow cofinite members.
    #[arg(long)]
    cofinite: bool,
}

impl UniverseArgs {
    fn universes(&self) -> Vec<Universe> {
        if self.window.is_none() && self.samples.is_none() {
            let mut us = harness::default_universes().to_vec();
            if self.seed != DEFAULT_SEED {
                for u in &mut us {
                    if let harness::Mode::Sampled { seed, .. } = &mut u.mode {
                        *seed = self.seed;
                    }
                }
            }
            return us;
        }
        let window = self.window.unwrap_or(3);
        vec![match self.samples.unwrap_or(DEFAULT_SAMPLES) {
            0 => Universe::exhaustive(window, self.cofinite),
            n => Universe::sampled(window, self.cofinite, n, self.seed),
        }]
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Decide the arrow and its labels between two objects.
    Decide {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum, default_value_t = LabelArg::Arrow)]
        label: LabelArg,
        /// Use the literal star template for explicit pairs.
        #[arg(long)]
        diagnostic_literal_star: bool,
    },
    Product {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    Coproduct {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// The (wc)-(f) factorization of an arrow.
    Factorize {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// The exponential `c^b`, or its slice version over `a`.
    Exp {
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        a: Option<String>,
    },
    /// The weak exponential over `a`; with `--z`, whether `z` maps into it.
    Wexp {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        z: Option<String>,
    },
    /// Univalence certificate of one fibration, or of every fibration in a
    /// universe.
    Univalence {
        #[arg(long, requires = "base")]
        total: Option<String>,
        #[arg(long, requires = "total")]
        base: Option<String>,
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// p-smallness against `Ũ → ⊤`, for one fibration or a whole universe.
    Psmall {
        #[arg(long, requires = "base")]
        total: Option<String>,
        #[arg(long, requires = "total")]
        base: Option<String>,
        #[command(flatten)]
        universe: UniverseArgs,
    },
    Axioms {
        #[command(flatten)]
        universe: UniverseArgs,
        /// Run only the named checks.
        #[arg(long)]
        check: Vec<String>,
        /// Also run iso-invariance under the literal star template.
        #[arg(long)]
        diagnostic_literal_star: bool,
    },
    Claims {
        #[command(flatten)]
        universe: UniverseArgs,
        #[arg(long)]
        check: Vec<String>,
    },
}

enum Failure {
    Parse(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) | Failure::Core(Error::WrongKind { .. }) => 2,
            Failure::Core(Error::UndecidedPair { .. }) => 3,
            Failure::Core(Error::SizeGuard { .. }) => 4,
            Failure::Core(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Parse(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

/// Reads a path if it names a file, otherwise takes the text as inline JSON.
fn load_node(arg: &str) -> Result<Node, Failure> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg).map_err(|e| Failure::Parse(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("cannot parse {arg:?}: {e}")))
}

fn load_obj(arg: &str) -> Result<Obj, Failure> {
    match load_node(arg)? {
        Node::Explicit(o) => Ok(o),
        Node::Virtual(v) => match v.explicit_form() {
            Some(o) => Ok(o?),
            None => Err(Error::WrongKind { expected: "explicit object", got: v.to_string() }.into()),
        },
    }
}

fn fact(name: impl Into<String>, holds: bool) -> Fact {
    Fact { name: name.into(), holds }
}

fn parse_checks(names: &[String], pool: &[Check]) -> Result<Vec<Check>, Failure> {
    if names.is_empty() {
        return Ok(pool.to_vec());
    }
    names
        .iter()
        .map(|n| {
            n.parse::<Check>()
                .ok()
                .filter(|c| pool.contains(c))
                .ok_or_else(|| Failure::Parse(format!("unknown check {n}")))
        })
        .collect()
}

fn command_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn run(verb: &Verb) -> Result<Report, Failure> {
    let mut report = Report::new(command_line());
    match verb {
        Verb::Decide { from, to, label, diagnostic_literal_star } => {
            let (a, b) = (load_node(from)?, load_node(to)?);
            let name = label.name();
            let label = Label::from(*label);
            if let (true, Node::Explicit(x), Node::Explicit(y)) = (*diagnostic_literal_star, &a, &b) {
                let v = kernel::decide_with(StarTemplate::Literal, x, y);
                report.facts.push(fact(format!("{a} —({name})→ {b} [literal star]"), label.of(&v)));
                report.verdict = Some(v);
            } else {
                let holds = vobj::decide_label(&a, &b, label)?;
                report.verdict = vobj::decide(&a, &b).ok();
                report.facts.push(fact(format!("{a} —({name})→ {b}"), holds));
            }
        }
        Verb::Product { x, y } => {
            report.result = Some(kernel::product(&load_obj(x)?, &load_obj(y)?).into());
        }
        Verb::Coproduct { x, y } => {
            report.result = Some(kernel::coproduct(&load_obj(x)?, &load_obj(y)?).into());
        }
        Verb::Factorize { from, to } => {
            let (x, y) = (load_obj(from)?, load_obj(to)?);
            let arrow = kernel::arrow_exists(&x, &y);
            report.facts.push(fact(format!("{x} → {y}"), arrow));
            if arrow {
                let wc = VObj::wc(x.clone(), y.clone());
                let (xn, yn, wn): (Node, Node, Node) = (x.into(), y.into(), wc.clone().into());
                let left = vobj::decide(&xn, &wn)?;
                let right = vobj::decide(&wn, &yn)?;
                report.facts.push(fact(format!("{xn} —(w)→ {wn}"), left.w));
                report.facts.push(fact(format!("{xn} —(c)→ {wn}"), left.c));
                report.facts.push(fact(format!("{wn} —(f)→ {yn}"), right.f));
                report.result = Some(wn);
            }
        }
        Verb::Exp { b, c, a } => {
            let (b, c) = (load_obj(b)?, load_obj(c)?);
            let e = match a {
                Some(a) => vobj::exp_slice(&load_obj(a)?, &b, &c)?,
                None => vobj::exp_explicit(&b, &c),
            };
            report.result = Some(e.into());
        }
        Verb::Wexp { a, b, c, z } => {
            let v = VObj::Wexp { a: load_obj(a)?, b: load_obj(b)?, c: load_obj(c)? };
            if let Some(z) = z {
                let z = load_obj(z)?;
                let VObj::Wexp { a, b, c } = &v else { unreachable!() };
                let into = vobj::arrow_into_vobj(&z, &v);
                let direct = kernel::arrow_exists(&z, a)
                    && kernel::label_w(&kernel::product(&z, b), &kernel::product(&z, c));
                report.facts.push(fact(format!("{z} → {v}"), into));
                report.facts.push(fact("membership and direct (w) test agree", into == direct));
            }
            report.result = Some(v.into());
        }
        Verb::Univalence { total, base, universe } => match (total, base) {
            (Some(t), Some(b)) => {
                let f = Fibration::new(load_obj(t)?, load_obj(b)?)?;
                report.certificates.push(univalence::is_univalent(&f));
            }
            _ => {
                for u in universe.universes() {
                    report.certificates.extend(univalence::certify(&u)?);
                }
            }
        },
        Verb::Psmall { total, base, universe } => match (total, base) {
            (Some(t), Some(b)) => {
                let f = Fibration::new(load_obj(t)?, load_obj(b)?)?;
                let p = univalence::universal_fibration();
                let p_small = univalence::is_p_small(&f, &p)?;
                report.facts.push(fact(format!("{} → {} is p-small over Ũ → ⊤", f.total(), f.base()), p_small));
                report.facts.push(fact("⊥ —(wc)→ total", univalence::is_small(&f)));
            }
            _ => {
                report.facts.extend(univalence::universe_facts());
                for u in universe.universes() {
                    report.checks.push(univalence::verify_universal(&u)?);
                }
            }
        },
        Verb::Axioms { universe, check, diagnostic_literal_star } => {
            let checks = parse_checks(check, &Check::AXIOMS)?;
            for u in universe.universes() {
                for c in &checks {
                    report.checks.push(harness::check_axiom(*c, &u)?);
                }
                if *diagnostic_literal_star {
                    report.diagnostics.push(harness::literal_star_diagnostic(&u)?);
                }
            }
        }
        Verb::Claims { universe, check } => {
            let checks = parse_checks(check, &Check::CLAIMS)?;
            for u in universe.universes() {
                for c in &checks {
                    report.checks.push(harness::check_claim(*c, &u)?);
                }
            }
        }
    }
    Ok(report.finish())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli.verb) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qtnc: {}", e.message());
            return ExitCode::from(e.exit_code());
        }
    };
    let text = match cli.format {
        Format::Human => report.human(),
        Format::Machine => report.to_json() + "\n",
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("qtnc: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(if report.pass { 0 } else { 1 })
}
