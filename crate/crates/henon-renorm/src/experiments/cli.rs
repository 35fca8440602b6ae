use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::{
    exp_bruteforce_spread, exp_count, exp_hausdorff, exp_pieces, exp_pushup_tracking, exp_renorm, exp_scaling_function,
    exp_solve_1d, exp_universality_decay, exp_walk_vs_words, Context, ExperimentConfig, ExperimentError, Report,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ACCEPTANCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "henon-renorm", version, about = "Renormalization experiments for Henon-like maps")]
pub struct Cli {
    /// TOML or JSON experiment config; defaults are used for missing keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (also settable through HLAB_OUTPUT_DIR).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run the pipeline twice and compare the data tables byte for byte.
    #[arg(long, global = true)]
    pub verify_reproducible: bool,
    /// Print the default config as TOML and exit.
    #[arg(long)]
    pub print_default_config: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

/// Config overrides shared by all subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Perturbation size; a list sets the maps of multi-map pipelines.
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Tower and tuning depth.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Number of random walks.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Solve for the one-dimensional fixed point and compare with the quadratic cascade.
    #[command(name = "solve-1d")]
    Solve1d(Overrides),
    /// Tune maps onto the stable manifold and renormalize them.
    Renorm(Overrides),
    /// Geometry of every piece at one level, and the frame-invariance trials.
    Pieces(Overrides),
    /// Word-counting measures against the depth random walk.
    Walk(Overrides),
    /// Exact mass of the controlled words and the enumeration oracle.
    Count(Overrides),
    /// Controlled-mass bound and the mass of universal pieces.
    Universality(Overrides),
    /// Thickness along push-up steps.
    Pushup(Overrides),
    /// Precision along the orbit of a deep piece.
    Bruteforce(Overrides),
    /// Deviation of scaling numbers from the universal ones.
    Scaling(Overrides),
    /// Dimension estimates across maps.
    Hausdorff(Overrides),
}

impl Command {
    pub fn overrides(&self) -> &Overrides {
        match self {
            Command::Solve1d(o)
            | Command::Renorm(o)
            | Command::Pieces(o)
            | Command::Walk(o)
            | Command::Count(o)
            | Command::Universality(o)
            | Command::Pushup(o)
            | Command::Bruteforce(o)
            | Command::Scaling(o)
            | Command::Hausdorff(o) => o,
        }
    }

    fn multi_map(&self) -> bool {
        matches!(self, Command::Renorm(_) | Command::Bruteforce(_) | Command::Scaling(_) | Command::Hausdorff(_))
    }

    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        let o = self.overrides();
        if !o.b.is_empty() {
            if self.multi_map() {
                cfg.b_values = o.b.clone();
            } else {
                cfg.b = o.b[0];
            }
        }
        if let Some(n) = o.n {
            cfg.n = n;
        }
        if let Some(t) = o.theta {
            cfg.theta = t;
        }
        if let Some(a) = o.alpha {
            cfg.alpha = a;
        }
        if let Some(d) = o.degree {
            cfg.degree = d;
        }
        if let Some(t) = o.tol {
            cfg.tol = t;
        }
        if let Some(d) = o.depth {
            cfg.tower_depth = d;
            cfg.tuning_depth = d;
        }
        if let Some(s) = o.samples {
            cfg.walk_samples = s;
        }
    }
}

/// Runs one pipeline.
pub fn run(cmd: &Command, cfg: &ExperimentConfig, ctx: &Context) -> Result<Report, ExperimentError> {
    match cmd {
        Command::Solve1d(_) => exp_solve_1d(cfg, ctx),
        Command::Renorm(_) => exp_renorm(cfg, ctx),
        Command::Pieces(_) => exp_pieces(cfg, ctx),
        Command::Walk(_) => exp_walk_vs_words(cfg, ctx),
        Command::Count(_) => exp_count(cfg, ctx),
        Command::Universality(_) => exp_universality_decay(cfg, ctx),
        Command::Pushup(_) => exp_pushup_tracking(cfg, ctx),
        Command::Bruteforce(_) => exp_bruteforce_spread(cfg, ctx),
        Command::Scaling(_) => exp_scaling_function(cfg, ctx),
        Command::Hausdorff(_) => exp_hausdorff(cfg, ctx),
    }
}

fn same_tables(a: &Report, b: &Report) -> Result<bool, ExperimentError> {
    if a.tables.len() != b.tables.len() {
        return Ok(false);
    }
    for (x, y) in a.tables.iter().zip(&b.tables) {
        if a.csv_bytes(x)? != b.csv_bytes(y)? {
            return Ok(false);
        }
    }
    Ok(a.summary == b.summary)
}

fn execute(cli: &Cli, cmd: &Command) -> Result<Report, ExperimentError> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    cmd.apply(&mut cfg);
    cfg.validate()?;
    let mut rep = run(cmd, &cfg, &Context::new())?;
    if cli.verify_reproducible {
        let again = run(cmd, &cfg, &Context::new())?;
        let same = same_tables(&rep, &again)?;
        rep.check("reproducible", same, format!("{} tables compared byte for byte", rep.tables.len() + 1));
    }
    let dir = cli.out.clone().unwrap_or_else(|| cfg.resolved_output_dir());
    let paths = rep.write(&dir)?;
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(rep)
}

fn print_report(rep: &Report) {
    if rep.pipeline == "count" {
        if let Some(t) = rep.table("count") {
            let r = &t.rows[0];
            println!("mu(P_{}) = {} = {}", r[0], r[6], r[7]);
        }
    }
    for (k, v) in &rep.summary {
        println!("{k} = {v}");
    }
    for c in &rep.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("runtime {:.2} s", rep.runtime_secs);
}

/// Parses `argv`, runs the pipeline and returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::CommandFactory;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if cli.print_default_config {
        print!("{}", ExperimentConfig::default().to_toml());
        return EXIT_OK;
    }
    let Some(cmd) = cli.command.clone() else {
        eprintln!("{}", Cli::command().render_usage());
        eprintln!("error: a subcommand is required");
        return EXIT_ERROR;
    };
    match execute(&cli, &cmd) {
        Ok(rep) => {
            print_report(&rep);
            if rep.passed() {
                EXIT_OK
            } else {
                EXIT_ACCEPTANCE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, ExperimentError::Config(_)) {
                eprintln!("{}", Cli::command().render_usage());
            }
            EXIT_ERROR
        }
    }
}
