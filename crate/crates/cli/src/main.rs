use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exotic_cli::{emit, load_scenario, Format, Report, RunOptions, Runner, Step};
use exotic_core::fibration::{base_points, pencil_singular_members, RationalPoly};
use exotic_core::plumbing::{
    boundary_homology, cf_eval, cf_expand, discriminant, embedding_certificate, meridian_class, wahl_generate,
    DEFAULT_MAX_MULT,
};
use exotic_core::{BigInt, Chain, Error, Result};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "exotic", version, about = "Rational blow-down and Seiberg-Witten bookkeeping")]
struct Cli {
    /// Output format: text or json.
    #[arg(long, global = true, default_value = "text")]
    emit: Format,
    /// Largest linking multiplicity tried by the blow-down certificate search.
    #[arg(long, global = true)]
    max_mult: Option<u32>,
    /// Worker threads for the basic-class enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Continued-fraction chain of C(p, q).
    Cf { p: BigInt, q: BigInt },
    /// Evaluate a chain of framings.
    Chain {
        #[arg(allow_negative_numbers = true, required = true)]
        weights: Vec<i64>,
    },
    /// Wahl chains up to a given length.
    Wahl { max_len: usize },
    /// Verify a scenario's class list against its chain.
    VerifyConfig {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Orthogonal complement of a scenario's configuration.
    Complement {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Enumerate candidate basic classes from a scenario's constraint file.
    EnumerateBasic {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Wall test between the reference and period chambers.
    Chamber {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Restriction of the canonical class to the boundary lens space.
    ExtendK {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Meridian residues, from a scenario or for C(p, q) with a chosen generator.
    Meridian {
        #[arg(long, conflicts_with_all = ["p", "q"])]
        scenario: Option<PathBuf>,
        p: Option<BigInt>,
        q: Option<BigInt>,
        #[arg(long, default_value_t = 0)]
        generator: usize,
    },
    /// Blow-down certificate, from a scenario or for C(p, q).
    BlowdownCert {
        #[arg(long, conflicts_with_all = ["p", "q"])]
        scenario: Option<PathBuf>,
        p: Option<BigInt>,
        q: Option<BigInt>,
    },
    /// Monodromy word and fiber Euler numbers of a scenario.
    Monodromy {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Singular members and base points of a pencil.
    Pencil {
        #[arg(long, conflicts_with_all = ["p1", "p2"])]
        scenario: Option<PathBuf>,
        #[arg(long, requires = "p2")]
        p1: Option<String>,
        #[arg(long, requires = "p1")]
        p2: Option<String>,
    },
    /// Run every step of a scenario.
    Reproduce { scenario: PathBuf },
}

enum Outcome {
    Report(Report),
    Value { text: String, json: Value },
}

type StepFn = fn(&mut Runner) -> Result<Step>;

fn steps(path: &Path, options: RunOptions, fns: &[StepFn]) -> Result<Outcome> {
    let mut runner = Runner::new(load_scenario(path)?, options)?;
    let mut out = Vec::new();
    for f in fns {
        out.push(f(&mut runner)?);
    }
    Ok(Outcome::Report(Report::new(&runner.scenario.name, out, None)))
}

fn pq(p: Option<BigInt>, q: Option<BigInt>) -> Result<(BigInt, BigInt)> {
    match (p, q) {
        (Some(p), Some(q)) => Ok((p, q)),
        _ => Err(Error::Scenario("give either --scenario or both P and Q".into())),
    }
}

fn weights(c: &Chain) -> String {
    c.to_string()
}

fn run(cli: Cli) -> Result<Outcome> {
    let options = RunOptions { workers: cli.parallel.max(1), max_mult: cli.max_mult };
    match cli.command {
        Command::Cf { p, q } => {
            let c = cf_expand(p.clone(), q.clone())?;
            let text =
                format!("C({p},{q}) = {}\nreversed {}\nlength {}\n", weights(&c), weights(&c.reversed()), c.len());
            Ok(Outcome::Value { text, json: json!({ "p": p.to_string(), "q": q.to_string(), "chain": c }) })
        }
        Command::Chain { weights: w } => {
            let c = Chain::from_i64s(&w)?;
            let value = cf_eval(&c)?;
            let disc = discriminant(&c);
            let bh = boundary_homology(&c).ok();
            let pq = c.recover_provenance();
            let mut text = format!("chain {}\nvalue {value}\ndiscriminant {disc}\n", weights(&c));
            if let Some((p, q)) = &pq {
                text.push_str(&format!("C({p},{q})\n"));
            }
            if let Some(b) = &bh {
                text.push_str(&format!("boundary homology Z/{}\n", b.modulus));
            }
            let json = json!({
                "chain": c,
                "value": value.to_string(),
                "discriminant": disc.to_string(),
                "pq": pq.map(|(p, q)| [p.to_string(), q.to_string()]),
                "boundary_order": bh.map(|b| b.modulus.to_string()),
            });
            Ok(Outcome::Value { text, json })
        }
        Command::Wahl { max_len } => {
            let set = wahl_generate::<BigInt>(max_len);
            let mut text = String::new();
            for c in &set {
                let pq = c.recover_provenance().map(|(p, q)| format!("  C({p},{q})")).unwrap_or_default();
                text.push_str(&format!("{}{pq}\n", weights(c)));
            }
            text.push_str(&format!("{} chains\n", set.len()));
            Ok(Outcome::Value { text, json: json!({ "max_len": max_len, "chains": set }) })
        }
        Command::VerifyConfig { scenario } => {
            steps(&scenario, options, &[Runner::cf_check, Runner::configuration_step])
        }
        Command::Complement { scenario } => {
            steps(&scenario, options, &[Runner::configuration_step, Runner::complement_step])
        }
        Command::EnumerateBasic { scenario } => {
            steps(&scenario, options, &[Runner::configuration_step, Runner::invariants_step, Runner::enumeration_step])
        }
        Command::Chamber { scenario } => steps(&scenario, options, &[Runner::wall_step]),
        Command::ExtendK { scenario } => steps(&scenario, options, &[Runner::extension_step]),
        Command::Meridian { scenario: Some(s), .. } => steps(&s, options, &[Runner::meridian_step]),
        Command::Meridian { scenario: None, p, q, generator } => {
            let (p, q) = pq(p, q)?;
            let c = cf_expand(p, q)?;
            let bh = boundary_homology(&c)?;
            let mut text = format!("H1 = Z/{}, generator: meridian of vertex {generator}\n", bh.modulus);
            let mut rows = Vec::new();
            for v in 0..c.len() {
                let m = meridian_class(&c, v, generator)?;
                text.push_str(&format!("vertex {v} (weight {}): {}\n", c.weights()[v], m.residue));
                rows.push(json!({ "vertex": v, "residue": m.residue.to_string() }));
            }
            let json = json!({ "chain": c, "modulus": bh.modulus.to_string(), "generator_vertex": generator, "meridians": rows });
            Ok(Outcome::Value { text, json })
        }
        Command::BlowdownCert { scenario: Some(s), .. } => steps(&s, options, &[Runner::certificate_step]),
        Command::BlowdownCert { scenario: None, p, q } => {
            let (p, q) = pq(p, q)?;
            let c = cf_expand(p, q)?;
            let max = options.max_mult.unwrap_or(DEFAULT_MAX_MULT);
            match embedding_certificate(&c, max)? {
                Some(cert) => {
                    let mults: Vec<String> = cert.multiplicities.iter().map(ToString::to_string).collect();
                    let mut text = format!("chain {}\nmultiplicities ({})\n", weights(&c), mults.join(","));
                    for s in &cert.reduction.trace {
                        text.push_str(&format!(
                            "blow down {}: det {} -> {}, rank {} -> {}\n",
                            s.vertex, s.det_before, s.det_after, s.rank_before, s.rank_after
                        ));
                    }
                    text.push_str(&format!("{} blow-downs\n", cert.reduction.count));
                    Ok(Outcome::Value { text, json: serde_json::to_value(&cert)? })
                }
                None => Ok(Outcome::Value {
                    text: format!("no certificate with multiplicities <= {max}\n"),
                    json: Value::Null,
                }),
            }
        }
        Command::Monodromy { scenario } => steps(&scenario, options, &[Runner::monodromy_step]),
        Command::Pencil { scenario: Some(s), .. } => steps(&s, options, &[Runner::pencil_step]),
        Command::Pencil { scenario: None, p1, p2 } => {
            let (Some(p1), Some(p2)) = (p1, p2) else {
                return Err(Error::Scenario("give either --scenario or both --p1 and --p2".into()));
            };
            let p1 = RationalPoly::<BigInt>::parse(&p1)?;
            let p2 = RationalPoly::<BigInt>::parse(&p2)?;
            let members = pencil_singular_members(&p1, &p2)?;
            let points = base_points(&p1, &p2)?;
            let mut text = format!("determinant {}\n", members.determinant);
            for m in &members.members {
                text.push_str(&format!("member {}\n", m.describe()));
            }
            text.push_str(&format!("{} singular members\n", members.total));
            text.push_str(&format!(
                "base point multiplicities {:?}, total {}\n",
                points.multiplicities(),
                points.total
            ));
            Ok(Outcome::Value { text, json: json!({ "members": members.to_json(), "base_points": points.to_json() }) })
        }
        Command::Reproduce { scenario } => Ok(Outcome::Report(Runner::new(load_scenario(&scenario)?, options)?.run()?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.emit;
    let result = run(cli).and_then(|outcome| match outcome {
        Outcome::Report(r) => Ok((emit(&r, format)?, r.pass)),
        Outcome::Value { text, json } => Ok(match format {
            Format::Text => (text, true),
            Format::Json => (serde_json::to_string_pretty(&json)? + "\n", true),
        }),
    });
    match result {
        Ok((out, pass)) => {
            print!("{out}");
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
