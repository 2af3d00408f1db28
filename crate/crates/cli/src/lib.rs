//! The `wasp` command-line front end.

pub mod dot;
pub mod render;

use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use wasp_core::data::{
    fit_theta, load_dataset, log_score, sample_events, theta_from_json, theta_to_json,
};
use wasp_core::{
    parse_program_with, Analysis, ClassKey, Dataset, EventMode, Options, ParseOptions,
    ThetaAssignment, DEFAULT_MAX_SYMBOLS,
};

pub use render::{Format, Style, Table};

#[derive(Parser, Debug)]
#[command(
    name = "wasp",
    version,
    about = "Distributions over events of weighted answer set programs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "pretty")]
    pub format: Format,

    /// Print decimals with this many digits instead of exact rationals.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "6", require_equals = true)]
    pub approx: Option<usize>,

    /// Largest universe enumerated exhaustively.
    #[arg(long, global = true, env = "WASP_MAX_SYMBOLS", default_value_t = DEFAULT_MAX_SYMBOLS)]
    pub max_symbols: usize,

    /// Omit auxiliary `__aux` atoms from displayed events.
    #[arg(long, global = true)]
    pub hide_aux: bool,

    /// Accept `__`-prefixed atoms in the program, as written by rewrites.
    #[arg(long, global = true)]
    pub allow_reserved: bool,

    /// Add symbols of events and observations missing from the program.
    #[arg(long, global = true)]
    pub extend: bool,

    /// Parameter values as a JSON object.
    #[arg(long, global = true, value_name = "FILE")]
    pub theta: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stable models, one per line.
    Models { program: PathBuf },
    /// Total choices with their weights and stable models.
    Tchoices { program: PathBuf },
    /// Event classes with their sizes.
    Classes { program: PathBuf },
    /// Weights and probabilities of every class.
    Table { program: PathBuf },
    /// Probability of an event, or of a set of events.
    Prob {
        program: PathBuf,
        /// Event such as `"a -b"`; `{}` is the empty event. Repeat for a set.
        #[arg(short, long = "event", required = true, allow_hyphen_values = true)]
        events: Vec<String>,
    },
    /// The normalizing factor.
    Z { program: PathBuf },
    /// The lattice of stable cores in Graphviz format.
    Dot { program: PathBuf },
    /// Log-likelihood of a dataset.
    Score {
        program: PathBuf,
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
    },
    /// Grid search for the parameters that best explain a dataset.
    Fit {
        program: PathBuf,
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
        /// Grid steps per unit interval.
        #[arg(long, default_value_t = 10)]
        resolution: u32,
    },
    /// Draw events from the distribution.
    Sample {
        program: PathBuf,
        #[arg(short, long, default_value_t = 10)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    fn program(&self) -> &Path {
        match self {
            Command::Models { program }
            | Command::Tchoices { program }
            | Command::Classes { program }
            | Command::Table { program }
            | Command::Prob { program, .. }
            | Command::Z { program }
            | Command::Dot { program }
            | Command::Score { program, .. }
            | Command::Fit { program, .. }
            | Command::Sample { program, .. } => program,
        }
    }
}

/// Parses arguments and runs one command: 0 on success, 1 on user error,
/// 2 when the program panics.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        run(&cli, &mut stdout.lock(), &mut stderr.lock())
    }));
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
            {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(_) => ExitCode::from(2),
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_data(
    path: &Path,
    universe: &mut wasp_core::Universe,
    mode: EventMode,
) -> anyhow::Result<Dataset> {
    let file = fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(load_dataset(
        BufReader::new(file),
        universe,
        mode,
        &path.display().to_string(),
    )?)
}

/// Runs a parsed command, writing data to `out` and notices to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<()> {
    let path = cli.command.program();
    let text = read_text(path)?;
    let program = parse_program_with(
        &text,
        ParseOptions {
            allow_reserved: cli.allow_reserved,
        },
    )
    .with_context(|| format!("parsing {}", path.display()))?;
    let mode = if cli.extend {
        EventMode::Extend
    } else {
        EventMode::Strict
    };

    let mut universe = program.universe();
    let data = match &cli.command {
        Command::Score { data, .. } | Command::Fit { data, .. } => {
            Some(load_data(data, &mut universe, mode)?)
        }
        Command::Prob { events, .. } if cli.extend => {
            for e in events {
                universe.extend_from_event(e)?;
            }
            None
        }
        _ => None,
    };
    let options = Options {
        max_symbols: cli.max_symbols,
    };
    let analysis = Analysis::with_universe(&program, universe, &options)?;
    let style = Style {
        approx: cli.approx,
        hide_aux: cli.hide_aux,
    };
    let theta = match &cli.theta {
        Some(p) => Some(
            theta_from_json(&analysis, &read_text(p)?)
                .with_context(|| format!("reading {}", p.display()))?,
        ),
        None => None,
    };
    let ctx = Session {
        analysis: &analysis,
        style,
        format: cli.format,
        theta: theta.as_ref(),
    };

    match &cli.command {
        Command::Models { .. } => ctx.models(out),
        Command::Tchoices { .. } => ctx.tchoices(out),
        Command::Classes { .. } => ctx.classes(out),
        Command::Table { .. } => ctx.table(out),
        Command::Prob { events, .. } => ctx.prob(events, out),
        Command::Z { .. } => ctx.z(out),
        Command::Dot { .. } => Ok(out.write_all(dot::lattice(&analysis, &style).as_bytes())?),
        Command::Score { .. } => ctx.score(data.as_ref().expect("dataset loaded"), out),
        Command::Fit { resolution, .. } => ctx.fit(
            data.as_ref().expect("dataset loaded"),
            *resolution,
            out,
            err,
        ),
        Command::Sample { n, seed, .. } => ctx.sample(*n, *seed, out),
    }
}

struct Session<'a> {
    analysis: &'a Analysis,
    style: Style,
    format: Format,
    theta: Option<&'a ThetaAssignment>,
}

impl Session<'_> {
    fn value(
        &self,
        key_prob: anyhow::Result<wasp_core::RationalFn>,
        key: ClassKey,
    ) -> anyhow::Result<String> {
        match self.theta {
            Some(t) => Ok(self.style.number(&self.analysis.eval_prob(key, t)?)),
            None => Ok(self.style.function(self.analysis, &key_prob?)),
        }
    }

    fn poly(&self, p: &wasp_core::Poly) -> anyhow::Result<String> {
        match self.theta {
            Some(t) => Ok(self.style.number(&p.eval(t)?)),
            None => Ok(self.style.poly(self.analysis, p)),
        }
    }

    fn required_theta(&self) -> anyhow::Result<ThetaAssignment> {
        match self.theta {
            Some(t) => Ok(t.clone()),
            None if self.analysis.constraints().is_empty() => {
                Ok(ThetaAssignment::uniform(self.analysis.constraints()))
            }
            None => bail!("the program has free parameters; pass their values with --theta"),
        }
    }

    fn models(&self, out: &mut dyn Write) -> anyhow::Result<()> {
        let mut t = Table::new(vec!["model"]);
        t.bare = true;
        for m in self.analysis.models().iter() {
            t.push(vec![self.style.event(self.analysis, m)]);
        }
        Ok(t.write(self.format, out)?)
    }

    fn tchoices(&self, out: &mut dyn Write) -> anyhow::Result<()> {
        let a = self.analysis;
        let c = a.choices();
        let mut t = Table::new(vec!["choice", "w_T", "Pr_T", "models"]);
        for id in 0..c.len() {
            let models: Vec<String> = c
                .models_of(id)
                .iter()
                .map(|&m| self.style.event(a, a.models().get(m)))
                .collect();
            t.push(vec![
                self.style.event(a, c.choice(id)),
                self.style.number(c.weight(id)),
                self.style.number(&a.prob_tc(id)),
                models.join(", "),
            ]);
        }
        Ok(t.write(self.format, out)?)
    }

    fn classes(&self, out: &mut dyn Write) -> anyhow::Result<()> {
        let a = self.analysis;
        let mut t = Table::new(vec!["core", "label", "size"]);
        for key in a.classes().keys() {
            t.push(vec![
                self.style.class(a, key),
                wasp_core::eventspace::class_label(key, a.models()).to_string(),
                a.classes().size(key).to_string(),
            ]);
        }
        Ok(t.write(self.format, out)?)
    }

    fn table(&self, out: &mut dyn Write) -> anyhow::Result<()> {
        let a = self.analysis;
        let mut t = Table::new(vec!["core", "size", "w_R", "w_E", "Pr_E"]);
        let mut total_size = 0u128;
        let mut total_mass = BigRational::default();
        let mut total_fn: Option<wasp_core::RationalFn> = None;
        for key in a.classes().keys() {
            let size = a.classes().size(key);
            total_size += size;
            let prob = a.prob_class_event(key);
            if let Some(th) = self.theta {
                total_mass += a.eval_prob(key, th)? * BigRational::from_integer(size.into());
            } else if let Ok(f) = &prob {
                let scaled = wasp_core::RationalFn::new(
                    f.numerator().scale(&BigRational::from_integer(size.into())),
                    f.denominator().clone(),
                )
                .expect("nonzero denominator");
                total_fn = Some(match total_fn {
                    None => scaled,
                    Some(acc) => &acc + &scaled,
                });
            }
            t.push(vec![
                self.style.class(a, key),
                size.to_string(),
                self.poly(&a.weight_class(key))?,
                self.poly(&a.weight_event_class(key))?,
                self.value(prob.map_err(Into::into), key)?,
            ]);
        }
        let check = match (self.theta, total_fn) {
            (Some(_), _) => self.style.number(&total_mass),
            (None, Some(f)) => self.style.function(a, &f),
            (None, None) => self.style.function(a, &a.prob_class_event(a.lambda())?),
        };
        t.push(vec![
            "total".into(),
            total_size.to_string(),
            String::new(),
            String::new(),
            check,
        ]);
        Ok(t.write(self.format, out)?)
    }

    fn prob(&self, texts: &[String], out: &mut dyn Write) -> anyhow::Result<()> {
        let a = self.analysis;
        let events = texts
            .iter()
            .map(|t| {
                a.universe()
                    .parse_event(t)
                    .with_context(|| format!("event `{t}`"))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        let value = match self.theta {
            Some(th) => {
                let mut sum = BigRational::default();
                let mut seen = std::collections::BTreeSet::new();
                for e in &events {
                    if seen.insert(*e) {
                        sum += a.eval_prob(a.class_of(*e), th)?;
                    }
                }
                self.style.number(&sum)
            }
            None => self
                .style
                .function(a, &a.prob_event_set(events.iter().copied())?),
        };
        self.scalar("probability", value, out)
    }

    fn z(&self, out: &mut dyn Write) -> anyhow::Result<()> {
        let z = self.poly(self.analysis.normalizer()?)?;
        self.scalar("z", z, out)
    }

    fn scalar(&self, name: &str, value: String, out: &mut dyn Write) -> anyhow::Result<()> {
        match self.format {
            Format::Json => writeln!(out, "{}", serde_json::json!({ name: value }))?,
            Format::Tsv => writeln!(out, "{name}\n{value}")?,
            Format::Pretty => writeln!(out, "{value}")?,
        }
        Ok(())
    }

    fn score_table(&self, score: &wasp_core::Score) -> Table {
        let mut t = Table::new(vec!["log_likelihood", "zero_probability"]);
        t.push(vec![
            score.log_likelihood.to_string(),
            score.zero_probability.to_string(),
        ]);
        t
    }

    fn score(&self, data: &Dataset, out: &mut dyn Write) -> anyhow::Result<()> {
        let theta = self.required_theta()?;
        let score = log_score(self.analysis, data, &theta)?;
        Ok(self.score_table(&score).write(self.format, out)?)
    }

    fn fit(
        &self,
        data: &Dataset,
        resolution: u32,
        out: &mut dyn Write,
        err: &mut dyn Write,
    ) -> anyhow::Result<()> {
        if self.analysis.constraints().is_empty() {
            writeln!(err, "note: the program has no free parameters")?;
        }
        let fit = fit_theta(self.analysis, data, resolution)?;
        writeln!(out, "{}", theta_to_json(self.analysis, &fit.theta))?;
        writeln!(
            err,
            "grid points: {}; log-likelihood: {}; zero-probability observations: {}",
            fit.evaluated, fit.score.log_likelihood, fit.score.zero_probability
        )?;
        Ok(())
    }

    fn sample(&self, n: u64, seed: u64, out: &mut dyn Write) -> anyhow::Result<()> {
        let theta = self.required_theta()?;
        let data = sample_events(self.analysis, &theta, n, seed)?;
        let mut t = Table::new(vec!["event"]);
        t.bare = true;
        for (e, c) in data.iter() {
            for _ in 0..c {
                t.push(vec![self.style.event(self.analysis, e)]);
            }
        }
        Ok(t.write(self.format, out)?)
    }
}
