use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use syncgame::games::{clique_game, hom_game, read_game, write_game, GamePresentation, SynchronousGame};
use syncgame::graphs::{parse_dimacs, Graph};
use syncgame::groebner::TriState;
use syncgame::reduction::{parse_dimacs_cnf, read_gadget, Contraction, GadgetGraph};
use syncgame::{Error, Exec};

mod commands;

/// Decide perfect strategies for synchronous games.
#[derive(Parser, Debug)]
#[command(name = "syncgame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,

    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,

    /// Interior-point tolerance.
    #[arg(long, global = true, env = "SYNCGAME_TOL", default_value_t = 1e-8, value_parser = positive_f64)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gröbner-basis triviality of a game algebra.
    AlgCheck {
        #[command(flatten)]
        game: GameInput,
        /// Degree bound; defaults to twice the top relation degree plus 4.
        #[arg(long, value_parser = positive_usize)]
        d_max: Option<usize>,
        /// Write the basis here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Algebraic clique number, one Gröbner basis per n.
    CliqueAlg {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 4, value_parser = positive_usize)]
        n_max: usize,
        #[arg(long, value_parser = positive_usize)]
        d_max: Option<usize>,
    },
    /// Locally commuting clique number, and optionally the algebra dimension.
    CliqueLc {
        #[arg(long)]
        graph: PathBuf,
        /// Also report the dimension of the algebra for this n.
        #[arg(long, value_parser = positive_usize)]
        dimension: Option<usize>,
    },
    /// Search for a Positivstellensatz refutation and write the certificate.
    CstarRefute {
        #[command(flatten)]
        game: GameInput,
        /// Largest word length in the Gram basis.
        #[arg(long, default_value_t = 1, value_parser = positive_usize)]
        k: usize,
        /// Restrict the Gram basis to Gröbner-normal words.
        #[arg(long)]
        reduce_basis: bool,
        /// Certificate path; defaults to the game path with `.cert`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate in exact arithmetic.
    VerifyCert {
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        game: GameInput,
    },
    /// Lovász theta of a graph.
    Theta {
        #[arg(long)]
        graph: PathBuf,
        /// Use the complement of the graph read.
        #[arg(long)]
        complement: bool,
        /// Also print the optimal matrix.
        #[arg(long)]
        witness: bool,
    },
    /// Check ω ≤ ϑ(complement) ≤ χ on a graph or a random corpus.
    Sandwich {
        #[arg(long, conflicts_with = "random")]
        graph: Option<PathBuf>,
        /// Number of random graphs drawn with `--seed`.
        #[arg(long, value_parser = positive_usize)]
        random: Option<usize>,
        #[arg(long, default_value_t = 9, value_parser = positive_usize)]
        max_n: usize,
    },
    /// Compile a CNF formula into a clique game on its gadget graph.
    ReduceSat {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long, value_enum, default_value_t = ContractionArg::Intersect)]
        contraction: ContractionArg,
        /// Write the gadget graph here.
        #[arg(long)]
        gadget_out: Option<PathBuf>,
        /// Write the clique game here.
        #[arg(long)]
        game_out: Option<PathBuf>,
    },
    /// Verify the cluster and closed-neighbourhood identities of a gadget.
    CheckGadget {
        /// A gadget file, as written by `reduce-sat`.
        #[arg(long, conflicts_with = "cnf", required_unless_present = "cnf")]
        gadget: Option<PathBuf>,
        /// Build the gadget from a CNF file instead.
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ContractionArg::Intersect)]
        contraction: ContractionArg,
        #[arg(long, value_parser = positive_usize)]
        d_max: Option<usize>,
    },
    /// Write the refutation SDP of a game in SDPA sparse format.
    ExportSdpa {
        #[command(flatten)]
        game: GameInput,
        #[arg(long, default_value_t = 1, value_parser = positive_usize)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the homomorphism game Hom(from, to) as a game file.
    HomGame {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the complement of a DIMACS graph.
    Complement {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A game file, the homomorphism game of two graphs, or a clique game.
#[derive(Args, Debug)]
struct GameInput {
    #[arg(long, conflicts_with_all = ["from", "clique"])]
    game: Option<PathBuf>,
    /// Source graph of Hom(from, to).
    #[arg(long, requires = "to")]
    from: Option<PathBuf>,
    #[arg(long, requires = "from")]
    to: Option<PathBuf>,
    /// Clique game Hom(K_n, graph); needs `--on`.
    #[arg(long, requires = "on", value_parser = positive_usize)]
    clique: Option<usize>,
    #[arg(long, requires = "clique")]
    on: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ContractionArg {
    Intersect,
    SourceOnly,
}

impl From<ContractionArg> for Contraction {
    fn from(c: ContractionArg) -> Self {
        match c {
            ContractionArg::Intersect => Contraction::Intersect,
            ContractionArg::SourceOnly => Contraction::SourceOnly,
        }
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be positive and finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// Settings shared by every command.
pub struct RunConfig {
    pub json: bool,
    pub exec: Exec,
    pub seed: u64,
    pub tol: f64,
}

/// What a command produced: text lines, a JSON summary, and how sure it is.
pub struct Report {
    pub text: Vec<String>,
    pub json: Value,
    pub definite: bool,
}

impl Report {
    fn definite(text: Vec<String>, json: Value) -> Self {
        Report { text, json, definite: true }
    }

    fn tri(answer: TriState, text: Vec<String>, json: Value) -> Self {
        Report { text, json, definite: answer != TriState::Inconclusive }
    }
}

pub type CmdResult = std::result::Result<Report, String>;

fn read_text(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn in_file(path: &Path) -> impl FnOnce(Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

fn load_graph(path: &Path) -> Result<Graph, String> {
    parse_dimacs(&read_text(path)?).map_err(in_file(path))
}

fn load_game(input: &GameInput) -> Result<(SynchronousGame, Option<PathBuf>), String> {
    match input {
        GameInput { game: Some(p), .. } => Ok((read_game(&read_text(p)?).map_err(in_file(p))?, Some(p.clone()))),
        GameInput { from: Some(g), to: Some(h), .. } => Ok((hom_game(&load_graph(g)?, &load_graph(h)?), None)),
        GameInput { clique: Some(n), on: Some(g), .. } => Ok((clique_game(*n, &load_graph(g)?), None)),
        _ => Err("no game given: use --game FILE, --from G --to H, or --clique N --on G".into()),
    }
}

fn load_gadget(gadget: &Option<PathBuf>, cnf: &Option<PathBuf>, mode: Contraction) -> Result<GadgetGraph, String> {
    if let Some(p) = gadget {
        return read_gadget(&read_text(p)?).map_err(in_file(p));
    }
    let p = cnf.as_ref().ok_or("no gadget given: use --gadget FILE or --cnf FILE")?;
    let phi = parse_dimacs_cnf(&read_text(p)?).map_err(in_file(p))?;
    Ok(syncgame::reduction::reduce_to_clique_game_with(&phi, mode).0)
}

fn run(cli: Cli) -> CmdResult {
    let cfg = RunConfig {
        json: cli.json,
        exec: if cli.jobs == Some(1) { Exec::Sequential } else { Exec::Parallel },
        seed: cli.seed,
        tol: cli.tol,
    };
    match cli.command {
        Command::AlgCheck { game, d_max, out } => {
            let (g, _) = load_game(&game)?;
            commands::alg_check(&cfg, &g, d_max, out.as_deref())
        }
        Command::CliqueAlg { graph, n_max, d_max } => commands::clique_alg(&cfg, &load_graph(&graph)?, n_max, d_max),
        Command::CliqueLc { graph, dimension } => commands::clique_lc(&load_graph(&graph)?, dimension),
        Command::CstarRefute { game, k, reduce_basis, out } => {
            let (g, path) = load_game(&game)?;
            let out = out.or_else(|| path.map(|p| p.with_extension("cert")));
            commands::cstar_refute(&cfg, &GamePresentation::new(g), k, reduce_basis, out.as_deref())
        }
        Command::VerifyCert { cert, game } => {
            let (g, _) = load_game(&game)?;
            let text = read_text(&cert)?;
            commands::verify_cert(&text, &GamePresentation::new(g)).map_err(|e| format!("{}: {e}", cert.display()))
        }
        Command::Theta { graph, complement, witness } => {
            let g = load_graph(&graph)?;
            commands::theta(&cfg, &if complement { g.complement() } else { g }, witness)
        }
        Command::Sandwich { graph, random, max_n } => {
            let graphs = match (graph, random) {
                (Some(p), _) => vec![load_graph(&p)?],
                (None, Some(count)) => Graph::random_corpus(count, max_n, cfg.seed),
                (None, None) => return Err("sandwich needs --graph FILE or --random COUNT".into()),
            };
            commands::sandwich(&cfg, &graphs)
        }
        Command::ReduceSat { cnf, contraction, gadget_out, game_out } => {
            let phi = parse_dimacs_cnf(&read_text(&cnf)?).map_err(in_file(&cnf))?;
            commands::reduce_sat(&phi, contraction.into(), gadget_out.as_deref(), game_out.as_deref())
        }
        Command::CheckGadget { gadget, cnf, contraction, d_max } => {
            let g = load_gadget(&gadget, &cnf, contraction.into())?;
            commands::check_gadget(&cfg, &g, d_max)
        }
        Command::ExportSdpa { game, k, out } => {
            let (g, _) = load_game(&game)?;
            commands::export_sdpa_cmd(&GamePresentation::new(g), k, &out)
        }
        Command::HomGame { from, to, out } => {
            let game = hom_game(&load_graph(&from)?, &load_graph(&to)?);
            write_text(&out, &write_game(&game))?;
            let text = vec![format!("wrote {} ({} inputs, {} outputs)", out.display(), game.n_inputs(), game.n_outputs())];
            Ok(Report::definite(text, json!({ "out": out, "inputs": game.n_inputs(), "outputs": game.n_outputs() })))
        }
        Command::Complement { graph, out } => {
            let g = load_graph(&graph)?.complement();
            write_text(&out, &g.to_dimacs())?;
            Ok(Report::definite(
                vec![format!("wrote {} ({} vertices, {} edges)", out.display(), g.n_vertices(), g.n_edges())],
                json!({ "out": out, "vertices": g.n_vertices(), "edges": g.n_edges() }),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(j) = cli.jobs {
        // read by rayon when its global pool starts
        std::env::set_var("RAYON_NUM_THREADS", j.to_string());
    }
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            if json {
                println!("{}", report.json);
            } else {
                for line in &report.text {
                    println!("{line}");
                }
            }
            if report.definite {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(msg) => {
            if json {
                println!("{}", json!({ "error": msg }));
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
