//! The `curveter` command-line tool.
//!
//! [`run`] takes the arguments after the program name and returns the exit
//! code together with everything destined for standard output and standard
//! error, so the binary is a thin wrapper and tests can call it directly.
//!
//! Exit codes: `0` success, `1` domain failure (empty territory, failed
//! path search, failed flatness check), `2` usage error.

pub mod parse;

use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use curveter_core::families::{connect_to_partition_point, SmoothingFamily};
use curveter_core::invariants::{make_partition_singularity, realize_for_genus, record};
use curveter_core::territory::{
    check_counting_identity, decompose, enumerate, DEFAULT_MAX_CANDIDATES,
};
use curveter_core::wire::{
    scalars_to_wire, AlgebraWire, CertificateWire, ComponentWire, ConnectFailureWire,
    DecompositionWire, EnumerationWire, ReportWire, SmoothCheckWire, SubalgebraWire,
};
use curveter_core::{
    AlgebraKind, ConnectOutcome, Error as CoreError, FieldSpec, GermAlgebra, Subalgebra,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use parse::{parse_element_list, parse_roots};

/// Environment variable overriding the enumeration work bound.
pub const MAX_CANDIDATES_ENV: &str = "CURVETER_MAX_CANDIDATES";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "curveter",
    version,
    about = "Territories of curve singularities over exact fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Branches, conductances, delta and genus of a point.
    Invariants(InvariantsArgs),
    /// Split a point of A(c) into local points along its idempotents.
    Decompose(PointArgs),
    /// List all points of a territory over F_p.
    Enumerate(EnumerateArgs),
    /// Join a point of A+(c) to a partition singularity point by pencils.
    Connect(ConnectArgs),
    /// Flatness and special-fibre checks for the smoothing family.
    SmoothCheck(SmoothArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Compact JSON (the default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug)]
struct AmbientArgs {
    /// Characteristic: 0 for Q, or a prime.
    #[arg(long = "char", value_name = "0|p")]
    characteristic: u64,
    /// Conductances c1,c2,...
    #[arg(long, value_delimiter = ',', required = true)]
    cond: Vec<usize>,
    /// Work in A+(c) instead of A(c).
    #[arg(long)]
    plus: bool,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    ambient: AmbientArgs,
    /// Generators, e.g. "(t1, t2), (t1^2, 0)"; the unit is always included.
    #[arg(long, default_value = "")]
    gens: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct InvariantsArgs {
    #[command(flatten)]
    ambient: AmbientArgs,
    /// Generators of the point.
    #[arg(long, conflicts_with_all = ["n", "genus"])]
    gens: Option<String>,
    /// Use the partition singularity X_n inside A+(c).
    #[arg(long, value_delimiter = ',', conflicts_with = "genus")]
    n: Option<Vec<usize>>,
    /// Use the greedy partition singularity of this genus inside A+(c).
    #[arg(long)]
    genus: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    ambient: AmbientArgs,
    /// Codimension of the points.
    #[arg(long)]
    corank: usize,
    /// Cap on candidate subspaces.
    #[arg(long, env = MAX_CANDIDATES_ENV, default_value_t = DEFAULT_MAX_CANDIDATES)]
    max_candidates: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ConnectArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Positive weight per branch for the first degeneration.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
struct SmoothArgs {
    /// Characteristic: 0 for Q, or a prime.
    #[arg(long = "char", value_name = "0|p")]
    characteristic: u64,
    /// Exponents n1,n2,...
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Roots, branches separated by ';', e.g. "0,1;0". Random if omitted.
    #[arg(long)]
    x: Option<String>,
    /// Seed for random roots.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draw pairwise distinct random roots on each branch.
    #[arg(long)]
    distinct: bool,
    /// Degree cuts for the flatness check; default max(n)..=max(n)+3.
    #[arg(long, value_delimiter = ',')]
    cut: Option<Vec<usize>>,
    /// Truncation per gluing branch; defaults to the root multiplicities.
    #[arg(long, value_delimiter = ',')]
    trunc: Option<Vec<usize>>,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    /// Exit code 1, with a JSON document still written to standard output.
    Domain {
        payload: String,
        message: String,
    },
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn core_failure(e: CoreError) -> Failure {
    match e {
        CoreError::InvariantViolation(_)
        | CoreError::CertificateRejected(_)
        | CoreError::ClosureDidNotStabilize(_) => Failure::Domain {
            payload: String::new(),
            message: e.to_string(),
        },
        other => Failure::Usage(other.to_string()),
    }
}

struct Session {
    notes: Vec<String>,
}

impl Session {
    fn field(&self, characteristic: u64) -> Result<FieldSpec, Failure> {
        FieldSpec::new(characteristic).map_err(usage)
    }

    fn ambient(&self, a: &AmbientArgs) -> Result<Arc<GermAlgebra>, Failure> {
        let field = self.field(a.characteristic)?;
        let kind = if a.plus {
            AlgebraKind::Plus
        } else {
            AlgebraKind::Full
        };
        Ok(Arc::new(
            GermAlgebra::new(field, &a.cond, kind).map_err(usage)?,
        ))
    }

    fn point(&mut self, alg: &Arc<GermAlgebra>, gens: &str) -> Result<Subalgebra, Failure> {
        let parsed = parse_element_list(gens, alg).map_err(usage)?;
        let mut vecs = Vec::with_capacity(parsed.len());
        for p in parsed {
            self.notes.extend(p.notes);
            vecs.push(p.vector);
        }
        Subalgebra::generate(alg, &vecs).map_err(core_failure)
    }
}

fn render<T: Serialize>(value: &T, out: &Output) -> String {
    let mut s = if out.pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("wire types serialize");
    s.push('\n');
    s
}

fn invariants(s: &mut Session, a: InvariantsArgs) -> Result<String, Failure> {
    let alg = s.ambient(&a.ambient)?;
    let point = if let Some(n) = &a.n {
        if !a.ambient.plus {
            return Err(usage("--n builds a point of A+(c) and needs --plus"));
        }
        make_partition_singularity(alg.field(), n, alg.conductances()).map_err(core_failure)?
    } else if let Some(g) = a.genus {
        if !a.ambient.plus {
            return Err(usage("--genus builds a point of A+(c) and needs --plus"));
        }
        let Some(n) = realize_for_genus(g, alg.conductances()) else {
            return Err(Failure::Domain {
                payload: String::new(),
                message: format!(
                    "no partition singularity of genus {g} fits conductances {:?}",
                    alg.conductances()
                ),
            });
        };
        make_partition_singularity(alg.field(), &n, alg.conductances()).map_err(core_failure)?
    } else {
        s.point(&alg, a.gens.as_deref().unwrap_or(""))?
    };
    Ok(render(&record(&point).map_err(core_failure)?, &a.output))
}

fn decompose_cmd(s: &mut Session, a: PointArgs) -> Result<String, Failure> {
    if a.ambient.plus {
        return Err(usage(
            "decompose works on points of the full algebra A(c); drop --plus",
        ));
    }
    let alg = s.ambient(&a.ambient)?;
    let point = s.point(&alg, &a.gens)?;
    let d = decompose(&point).map_err(core_failure)?;
    Ok(render(&DecompositionWire::from_point(&d), &a.output))
}

fn enumerate_cmd(s: &mut Session, a: EnumerateArgs) -> Result<String, Failure> {
    let alg = s.ambient(&a.ambient)?;
    if !alg.field().is_finite() {
        return Err(usage(
            "enumerate needs a finite field: pass --char p with p prime",
        ));
    }
    let points = enumerate(&alg, a.corank, a.max_candidates).map_err(core_failure)?;
    let (components, identity_holds) = match alg.kind() {
        AlgebraKind::Full => {
            let report = check_counting_identity(
                alg.field(),
                alg.conductances(),
                a.corank,
                a.max_candidates,
            )
            .map_err(core_failure)?;
            let wire = ReportWire::from_report(&report);
            (wire.components, wire.identity_holds)
        }
        AlgebraKind::Plus => {
            // every point of A+(c) is local: one block carrying the whole genus
            let m = alg.branches();
            let key = (1..=m).map(|i| i.to_string()).collect::<Vec<_>>().join(",");
            let component = ComponentWire {
                partition: vec![(1..=m).collect()],
                genus: [(key, a.corank)].into_iter().collect(),
                count: points.len(),
                observed: points.len(),
            };
            (vec![component], true)
        }
    };
    let wire = EnumerationWire {
        algebra: AlgebraWire::from_algebra(&alg),
        corank: a.corank,
        total: points.len(),
        components,
        identity_holds,
        points: points.iter().map(SubalgebraWire::from_subalgebra).collect(),
    };
    let text = render(&wire, &a.output);
    if points.is_empty() {
        return Err(Failure::Domain {
            payload: text,
            message: format!("the territory of corank {} is empty", a.corank),
        });
    }
    if !identity_holds {
        return Err(Failure::Domain {
            payload: text,
            message: "counting identity fails".into(),
        });
    }
    Ok(text)
}

fn connect_cmd(s: &mut Session, a: ConnectArgs) -> Result<String, Failure> {
    if !a.point.ambient.plus {
        return Err(usage("connect works on points of A+(c); pass --plus"));
    }
    let alg = s.ambient(&a.point.ambient)?;
    let point = s.point(&alg, &a.point.gens)?;
    match connect_to_partition_point(&point, a.weights.as_deref()).map_err(core_failure)? {
        ConnectOutcome::Connected(cert) => Ok(render(
            &CertificateWire::from_certificate(&cert),
            &a.point.output,
        )),
        ConnectOutcome::Failed { reason, visited } => {
            let wire = ConnectFailureWire {
                reason: reason.clone(),
                visited: visited
                    .iter()
                    .map(SubalgebraWire::from_subalgebra)
                    .collect(),
            };
            Err(Failure::Domain {
                payload: render(&wire, &a.point.output),
                message: reason,
            })
        }
    }
}

fn smooth_cmd(s: &mut Session, a: SmoothArgs) -> Result<String, Failure> {
    let field = s.field(a.characteristic)?;
    let family = match &a.x {
        Some(text) => {
            let roots = parse_roots(text, field).map_err(usage)?;
            SmoothingFamily::new(field, &a.n, roots).map_err(usage)?
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            SmoothingFamily::random(field, &a.n, &mut rng, a.distinct).map_err(usage)?
        }
    };
    let top = a.n.iter().copied().max().unwrap_or(0);
    let cuts = a.cut.clone().unwrap_or_else(|| (top..=top + 3).collect());
    let fiber_coranks = cuts
        .iter()
        .map(|&c| family.fiber_corank(c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let expected_corank = a.n.iter().sum::<usize>() - 1;
    let flat = fiber_coranks.iter().all(|&c| c == expected_corank);
    let germ = family.germ_at_gluing(a.trunc.as_deref()).map_err(usage)?;
    let wire = SmoothCheckWire {
        field: field.to_string(),
        n: a.n.clone(),
        x: family
            .roots()
            .iter()
            .map(|xs| scalars_to_wire(xs))
            .collect(),
        cuts,
        fiber_coranks,
        expected_corank,
        flat,
        germ: SubalgebraWire::from_subalgebra(&germ),
        germ_record: record(&germ).map_err(core_failure)?,
    };
    let text = render(&wire, &a.output);
    if !flat {
        return Err(Failure::Domain {
            payload: text,
            message: "fibre corank varies with the degree cut".into(),
        });
    }
    Ok(text)
}

/// Runs one invocation; `args` excludes the program name.
pub fn run<I, S>(args: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("curveter".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandResult {
                    exit_code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut session = Session { notes: Vec::new() };
    let outcome = match cli.command {
        Command::Invariants(a) => invariants(&mut session, a),
        Command::Decompose(a) => decompose_cmd(&mut session, a),
        Command::Enumerate(a) => enumerate_cmd(&mut session, a),
        Command::Connect(a) => connect_cmd(&mut session, a),
        Command::SmoothCheck(a) => smooth_cmd(&mut session, a),
    };
    let mut stderr: String = session
        .notes
        .iter()
        .map(|n| format!("note: {n}\n"))
        .collect();
    match outcome {
        Ok(stdout) => CommandResult {
            exit_code: 0,
            stdout,
            stderr,
        },
        Err(Failure::Usage(message)) => {
            stderr.push_str(&format!("error: {message}\n"));
            CommandResult {
                exit_code: 2,
                stdout: String::new(),
                stderr,
            }
        }
        Err(Failure::Domain { payload, message }) => {
            stderr.push_str(&format!("failure: {message}\n"));
            CommandResult {
                exit_code: 1,
                stdout: payload,
                stderr,
            }
        }
    }
}
