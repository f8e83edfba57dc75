use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ribbon_kh::complex::{self, EdgeAssignment};
use ribbon_kh::homology::{self, BigradedGroup, Report};
use ribbon_kh::links::{self, PdCode};
use ribbon_kh::moves;
use ribbon_kh::quasitree;
use ribbon_kh::{ArrowPresentation, Basepoint, RibbonGraph, SignCount};

#[derive(Parser)]
#[command(name = "ribbon-kh", version, about = "Khovanov homology of ribbon graphs and link diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex, edge and face counts, genus, loops and adequacy
    Info(InputArgs),
    /// Unreduced Khovanov homology
    Kh(HomologyArgs),
    /// Reduced Khovanov homology
    Rkh(HomologyArgs),
    /// Spanning quasi-trees with activities and gradings
    Qtrees {
        #[command(flatten)]
        input: InputArgs,
        /// Edge order as comma separated labels, first edge first
        #[arg(long)]
        edge_order: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Jones polynomial (at q^2) from the quasi-tree expansion
    Jones(InputArgs),
    /// Arrow presentation of the dual graph
    Dual(InputArgs),
    /// Apply a move script and print the resulting presentation
    Move {
        #[command(flatten)]
        input: InputArgs,
        /// Script file, or moves separated by `;`
        script: String,
        /// Also check homology invariance of every move
        #[arg(long)]
        check: bool,
    },
    /// Run the property checks
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random edge assignments and edge orders
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

#[derive(Args)]
struct InputArgs {
    /// File name, or the presentation / PD code itself
    input: String,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
    #[arg(long, default_value_t = complex::DEFAULT_MAX_EDGES)]
    max_edges: usize,
}

#[derive(Args)]
struct HomologyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    json: bool,
    /// Skip the link grading shift for PD input
    #[arg(long)]
    raw: bool,
    #[arg(long, num_args = 2, value_names = ["V", "G"])]
    basepoint: Option<Vec<usize>>,
    /// Sign the cube with a random edge assignment from this seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Auto,
    Pd,
    Arrows,
}

enum Input {
    Arrows(ArrowPresentation),
    Pd(PdCode),
}

struct Loaded {
    graph: RibbonGraph,
    presentation: ArrowPresentation,
    pd: Option<(PdCode, SignCount)>,
}

fn load(args: &InputArgs) -> Result<Loaded> {
    let text = if Path::new(&args.input).is_file() {
        fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input))?
    } else {
        args.input.clone()
    };
    let stripped: String = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join("\n");
    let input = match args.format {
        Format::Pd => Input::Pd(PdCode::parse(&stripped)?),
        Format::Arrows => Input::Arrows(ArrowPresentation::parse(&text)?),
        Format::Auto => {
            let t = stripped.trim_start();
            if t.starts_with("X[") || t.starts_with("PD[") {
                Input::Pd(PdCode::parse(&stripped)?)
            } else if t.starts_with("circle:") {
                Input::Arrows(ArrowPresentation::parse(&text)?)
            } else {
                bail!("cannot tell the input format; expected `X[` or `circle:`");
            }
        }
    };
    let loaded = match input {
        Input::Arrows(ap) => Loaded { graph: ap.to_ribbon_graph()?, presentation: ap, pd: None },
        Input::Pd(pd) => {
            let (ap, signs) = pd.all_a_ribbon_graph()?;
            Loaded { graph: ap.to_ribbon_graph()?, presentation: ap, pd: Some((pd, signs)) }
        }
    };
    if loaded.graph.edge_count() > args.max_edges {
        bail!("{} edges exceeds --max-edges {}", loaded.graph.edge_count(), args.max_edges);
    }
    Ok(loaded)
}

fn parse_order(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| anyhow!("bad edge label {t:?} in --edge-order")))
        .collect()
}

fn homology_cmd(args: &HomologyArgs, reduced: bool) -> Result<()> {
    let l = load(&args.input)?;
    let g = &l.graph;
    let eps = match args.seed {
        Some(s) => EdgeAssignment::random(g.edge_count(), &mut ChaCha8Rng::seed_from_u64(s)),
        None => EdgeAssignment::standard(g.edge_count()),
    };
    let basepoint = match (&args.basepoint, reduced) {
        (Some(b), true) => Some(Basepoint::new(b[0], b[1])),
        (None, true) => Some(Basepoint::default()),
        (Some(_), false) => bail!("--basepoint only applies to rkh"),
        (None, false) => None,
    };
    let c = complex::build(g, &eps, basepoint, args.input.max_edges)?;
    let mut kh = homology::homology(&c)?;
    if let (Some((_, signs)), false) = (&l.pd, args.raw) {
        let (r, s) = signs.grading_shift();
        kh = kh.shift(r, s);
    }
    if args.json {
        println!("{}", kh.to_json()?);
    } else {
        print!("{}", kh.table());
    }
    Ok(())
}

fn info_cmd(args: &InputArgs) -> Result<()> {
    let l = load(args)?;
    let g = &l.graph;
    println!(
        "V={} E={} F={} g={} loops={} components={} adequate={}",
        g.vertex_count(),
        g.edge_count(),
        g.face_count(g.all_edges()),
        g.genus(),
        g.loop_count(),
        g.component_count(),
        g.is_adequate()
    );
    if let Some((pd, signs)) = &l.pd {
        println!("crossings={} n+={} n-={}", pd.crossing_count(), signs.n_plus, signs.n_minus);
    }
    Ok(())
}

fn qtrees_cmd(args: &InputArgs, order: Option<&str>, json: bool) -> Result<()> {
    let l = load(args)?;
    let order = order.map(parse_order).transpose()?;
    let order = quasitree::resolve_order(&l.graph, order.as_deref())?;
    let records = quasitree::quasi_trees(&l.graph, &order)?;
    if json {
        println!("{}", serde_json::to_string(&records)?);
    } else {
        print!("{}", quasitree::table(&l.graph, &records));
        if quasitree::is_differential_forced_zero(&records) {
            println!("differential vanishes for degree reasons");
        }
    }
    Ok(())
}

fn jones_cmd(args: &InputArgs) -> Result<()> {
    let l = load(args)?;
    let p = match &l.pd {
        Some((pd, _)) => quasitree::jones_expansion(pd)?,
        None => {
            let order = quasitree::resolve_order(&l.graph, None)?;
            quasitree::quasi_tree_euler(&quasitree::quasi_trees(&l.graph, &order)?)
        }
    };
    println!("{p}");
    Ok(())
}

fn move_cmd(args: &InputArgs, script: &str, check: bool) -> Result<bool> {
    let l = load(args)?;
    let text = if Path::new(script).is_file() { fs::read_to_string(script)? } else { script.replace(';', "\n") };
    let mut ap = l.presentation.oriented()?;
    let mut ok = true;
    for site in moves::parse_script(&text)? {
        if check {
            let r = moves::check_invariance(&ap, site)?;
            eprintln!("{r}");
            ok &= r.passed();
        }
        ap = moves::apply_move(&ap, site)?;
    }
    println!("{ap}");
    Ok(ok)
}

fn check_cmd(args: &InputArgs, seed: u64, samples: usize) -> Result<bool> {
    let l = load(args)?;
    let g = &l.graph;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports: Vec<Report> = Vec::new();

    let mut assign = Report::new("edge-assignment independence");
    let reference = homology::khovanov(g)?;
    for _ in 0..samples {
        let eps = EdgeAssignment::random(g.edge_count(), &mut rng);
        let kh: BigradedGroup = homology::homology(&complex::build_complex(g, &eps)?)?;
        assign.require(kh == reference, || "homology changed under a random edge assignment".into());
    }
    reports.push(assign);

    if g.is_connected() {
        reports.push(homology::check_duality(g)?);
        reports.push(homology::check_grading_theorems(g)?);
        let mut orders = vec![quasitree::resolve_order(g, None)?];
        for _ in 0..samples {
            let mut o = orders[0].clone();
            o.shuffle(&mut rng);
            orders.push(o);
        }
        reports.push(quasitree::check_quasi_trees(g, &orders)?);
    }
    if let Some((pd, signs)) = &l.pd {
        reports.push(links::check_state_circles(pd)?);
        let mut jones = Report::new("jones expansion");
        let (r, s) = signs.grading_shift();
        let chi = homology::reduced_khovanov(g, Basepoint::default())?.shift(r, s).euler_characteristic();
        let expansion = quasitree::jones_expansion(pd)?;
        jones.require(chi == expansion, || format!("expansion {expansion}, reduced Euler characteristic {chi}"));
        reports.push(jones);
    }
    for r in &reports {
        println!("{r}");
    }
    Ok(reports.iter().all(Report::passed))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Info(a) => info_cmd(&a).map(|_| true),
        Command::Kh(a) => homology_cmd(&a, false).map(|_| true),
        Command::Rkh(a) => homology_cmd(&a, true).map(|_| true),
        Command::Qtrees { input, edge_order, json } => qtrees_cmd(&input, edge_order.as_deref(), json).map(|_| true),
        Command::Jones(a) => jones_cmd(&a).map(|_| true),
        Command::Dual(a) => {
            let l = load(&a)?;
            println!("{}", ArrowPresentation::from_ribbon_graph(&l.graph.dual()));
            Ok(true)
        }
        Command::Move { input, script, check } => move_cmd(&input, &script, check),
        Command::Check { input, seed, samples } => check_cmd(&input, seed, samples),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
