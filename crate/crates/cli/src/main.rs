use std::cell::RefCell;
use std::fmt::Write;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use interval_pam::fibers::{
    base_homotopy, cap_project, classify_fiber, contract, cover_homotopy, glue_g, push_homotopy, retract_r,
    standard_lift, Verdict,
};
use interval_pam::labeled::{
    check_admissible, double, labeled_normalize, mirror, positive_part, AdmissibilityFailure, LabeledConfig, Window,
};
use interval_pam::pam::FinitePam;
use interval_pam::rational::{fmt_q, parse_q, Q};
use interval_pam::scanning::{alpha_eval, alpha_trace};
use interval_pam::tensor::{tensor_eq, EqVerdict, DEFAULT_DEPTH};
use interval_pam_cli::dsl::{self, DslError};
use interval_pam_cli::svg;

/// Exact computations on labeled interval configurations.
#[derive(Parser)]
#[command(name = "ipam", version)]
struct Cli {
    /// PAM definition file for labels.
    #[arg(long, global = true, value_name = "FILE")]
    pam: Option<PathBuf>,
    /// Label for items written without one.
    #[arg(long, global = true, value_name = "ID")]
    default_label: Option<String>,
    /// Also write an SVG figure of the result.
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// PAM files.
    #[command(subcommand)]
    Pam(PamCmd),
    /// Labeled configurations.
    #[command(subcommand)]
    Config(ConfigCmd),
    /// The scanning map.
    #[command(subcommand)]
    Alpha(AlphaCmd),
    /// Elements of BM.
    #[command(subcommand)]
    Bm(BmCmd),
    /// Tensor products of two PAMs.
    #[command(subcommand)]
    Tensor(TensorCmd),
    Mirror {
        config: String,
    },
    Double {
        config: String,
    },
    PositivePart {
        config: String,
    },
    #[command(subcommand)]
    Homotopy(HomotopyCmd),
    #[command(subcommand)]
    Fiber(FiberCmd),
}

#[derive(Subcommand)]
enum PamCmd {
    Check {
        file: PathBuf,
        #[arg(long)]
        require_self_insummable: bool,
    },
}

#[derive(Subcommand)]
enum ConfigCmd {
    Normalize {
        config: String,
    },
    Eq {
        a: String,
        b: String,
    },
    Admissible {
        config: String,
        #[arg(long, value_parser = q_arg, default_value = "1")]
        eps: Q,
        /// Support window `a,b`.
        #[arg(long, value_parser = window_arg, allow_hyphen_values = true)]
        support: Window,
    },
}

#[derive(Subcommand)]
enum AlphaCmd {
    Eval {
        config: String,
        #[arg(long, value_parser = q_arg, allow_hyphen_values = true)]
        u: Q,
        /// Window center; defaults to `u`.
        #[arg(long, value_parser = q_arg, allow_hyphen_values = true)]
        t: Option<Q>,
    },
    Trace {
        config: String,
        #[arg(long = "len", value_parser = q_arg)]
        len: Q,
    },
}

#[derive(Subcommand)]
enum BmCmd {
    Canon {
        #[arg(allow_hyphen_values = true)]
        sum: String,
    },
}

#[derive(Subcommand)]
enum TensorCmd {
    Eq {
        a: String,
        b: String,
        /// Second factor; the first is `--pam`.
        #[arg(long, value_name = "FILE")]
        pam2: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum HomotopyCmd {
    Contract {
        config: String,
        #[arg(long, value_parser = q_arg)]
        t: Q,
        #[arg(long = "len", value_parser = q_arg)]
        len: Q,
    },
    Push {
        config: String,
        #[arg(long, value_parser = q_arg)]
        t: Q,
    },
    Base {
        #[arg(allow_hyphen_values = true)]
        sum: String,
        #[arg(long, value_parser = q_arg)]
        t: Q,
    },
    Cover {
        config: String,
        #[arg(long, value_parser = q_arg)]
        t: Q,
        #[arg(long = "len", value_parser = q_arg)]
        len: Q,
    },
}

#[derive(Subcommand)]
enum FiberCmd {
    Classify {
        config: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    Cap {
        config: String,
        #[arg(long = "len", value_parser = q_arg)]
        len: Q,
    },
    Lift {
        #[arg(default_value = "")]
        config: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long = "len", value_parser = q_arg)]
        len: Q,
    },
    Retract {
        config: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long = "len", value_parser = q_arg)]
        len: Q,
    },
    Glue {
        config: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Partition choice `a+b, ...`, one per nonzero coordinate of `z`.
        #[arg(long)]
        alpha: String,
        #[arg(long = "len", value_parser = q_arg)]
        len: Q,
    },
}

fn q_arg(s: &str) -> Result<Q, String> {
    parse_q(s.trim()).ok_or_else(|| format!("malformed rational `{s}`"))
}

fn window_arg(s: &str) -> Result<Window, String> {
    let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
    let (a, b) = (q_arg(a)?, q_arg(b)?);
    if a >= b {
        return Err("window needs a < b".into());
    }
    Ok(Window::new(a, b))
}

/// Outcome mapped onto the exit-code contract.
enum Failure {
    /// 1: predicate false or values distinct.
    False,
    /// 2: unreadable input.
    Parse(String),
    /// 3: well-formed input outside the domain.
    Domain(String),
    /// 4: bounded search exhausted.
    Unknown,
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        match e {
            DslError::Parse { .. } => Failure::Parse(e.to_string()),
            DslError::Invalid(_) | DslError::Domain(_) => Failure::Domain(e.to_string()),
        }
    }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

struct Ctx {
    pam: Option<PathBuf>,
    default_label: Option<String>,
    svg: Option<PathBuf>,
    out: RefCell<String>,
    err: RefCell<String>,
}

impl Ctx {
    fn say(&self, line: impl std::fmt::Display) {
        let _ = writeln!(self.out.borrow_mut(), "{line}");
    }

    fn note_len(&self, s: Q) {
        let _ = writeln!(self.err.borrow_mut(), "len {}", fmt_q(&s));
    }

    fn pam(&self) -> Result<FinitePam, Failure> {
        let path = self.pam.as_ref().ok_or_else(|| Failure::Parse("this command needs --pam FILE".into()))?;
        dsl::parse_pam(&read(path)?).map_err(|e| with_file(e, path))
    }

    /// A configuration argument, or `@path` to read one from a file.
    fn config(&self, arg: &str, pam: &FinitePam) -> Result<LabeledConfig, Failure> {
        let text = match arg.strip_prefix('@') {
            Some(p) => read(&PathBuf::from(p))?,
            None => arg.to_string(),
        };
        let default = match &self.default_label {
            Some(id) => Some(pam.elem(id).ok_or_else(|| Failure::Parse(format!("unknown default label `{id}`")))?),
            None => None,
        };
        Ok(dsl::parse_config(&text, pam, default)?)
    }

    fn emit_config(&self, xi: &LabeledConfig, pam: &FinitePam) -> Result<(), Failure> {
        self.say(dsl::print_config(xi, pam));
        if let Some(p) = &self.svg {
            fs::write(p, svg::render_config(xi, pam)).map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?;
        }
        Ok(())
    }
}

fn with_file(e: DslError, path: &std::path::Path) -> Failure {
    match e {
        DslError::Parse { .. } => Failure::Parse(format!("{}:{e}", path.display())),
        other => other.into(),
    }
}

fn run(cmd: Cmd, ctx: &Ctx) -> Result<(), Failure> {
    match cmd {
        Cmd::Pam(PamCmd::Check { file, require_self_insummable }) => {
            let pam = dsl::parse_pam(&read(&file)?).map_err(|e| with_file(e, &file))?;
            if require_self_insummable && !pam.is_self_insummable() {
                let witness = pam.nonzero().find(|&a| pam.add(a, a).is_some()).expect("not self-insummable");
                return Err(Failure::Domain(format!(
                    "`{0} + {0}` is defined but self-insummability was required",
                    pam.name_of(witness)
                )));
            }
            ctx.say(format!("ok {} ({} elements)", pam.name(), pam.len()));
        }
        Cmd::Config(c) => {
            let pam = ctx.pam()?;
            match c {
                ConfigCmd::Normalize { config } => {
                    let xi = ctx.config(&config, &pam)?;
                    ctx.emit_config(&labeled_normalize(&xi, &pam).map_err(domain)?, &pam)?;
                }
                ConfigCmd::Eq { a, b } => {
                    let a = labeled_normalize(&ctx.config(&a, &pam)?, &pam).map_err(domain)?;
                    let b = labeled_normalize(&ctx.config(&b, &pam)?, &pam).map_err(domain)?;
                    if a != b {
                        ctx.say("distinct");
                        return Err(Failure::False);
                    }
                    ctx.say("equal");
                }
                ConfigCmd::Admissible { config, eps, support } => {
                    let xi = ctx.config(&config, &pam)?;
                    if eps <= Q::from_integer(0) || support.b - support.a <= eps {
                        return Err(Failure::Domain("need 0 < eps < b - a".into()));
                    }
                    match check_admissible(&xi, eps, support, &pam) {
                        Ok(()) => ctx.say("admissible"),
                        Err(AdmissibilityFailure::Tensor(e)) => return Err(domain(e)),
                        Err(e) => {
                            ctx.say(format!("not admissible: {e}"));
                            return Err(Failure::False);
                        }
                    }
                }
            }
        }
        Cmd::Alpha(c) => {
            let pam = ctx.pam()?;
            match c {
                AlphaCmd::Eval { config, u, t } => {
                    let xi = ctx.config(&config, &pam)?;
                    let z = alpha_eval(&xi, u, t.unwrap_or(u), &pam).map_err(domain)?;
                    ctx.say(dsl::print_bm(&z, &pam).to_string());
                }
                AlphaCmd::Trace { config, len } => {
                    let xi = ctx.config(&config, &pam)?;
                    let lp = alpha_trace(&xi, len, &pam).map_err(domain)?;
                    print!("{}", lp.dump(&pam));
                    if let Some(p) = &ctx.svg {
                        fs::write(p, svg::render_loop(&lp, &pam))
                            .map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?;
                    }
                }
            }
        }
        Cmd::Bm(BmCmd::Canon { sum }) => {
            let pam = ctx.pam()?;
            ctx.say(dsl::print_bm(&dsl::parse_bm(&sum, &pam)?, &pam).to_string());
        }
        Cmd::Tensor(TensorCmd::Eq { a, b, pam2, depth }) => {
            let ca = ctx.pam()?;
            let cb = dsl::parse_pam(&read(&pam2)?).map_err(|e| with_file(e, &pam2))?;
            let x = dsl::parse_pairs(&a, &ca, &cb)?;
            let y = dsl::parse_pairs(&b, &ca, &cb)?;
            match tensor_eq(&ca, &cb, &x, &y, depth) {
                EqVerdict::Equal => ctx.say("equal"),
                EqVerdict::Distinct => {
                    ctx.say("distinct");
                    return Err(Failure::False);
                }
                EqVerdict::Unknown => {
                    ctx.say("unknown");
                    return Err(Failure::Unknown);
                }
            }
        }
        Cmd::Mirror { config } => {
            let pam = ctx.pam()?;
            ctx.emit_config(&mirror(&ctx.config(&config, &pam)?), &pam)?;
        }
        Cmd::Double { config } => {
            let pam = ctx.pam()?;
            ctx.emit_config(&double(&ctx.config(&config, &pam)?), &pam)?;
        }
        Cmd::PositivePart { config } => {
            let pam = ctx.pam()?;
            ctx.emit_config(&positive_part(&ctx.config(&config, &pam)?, &pam).map_err(domain)?, &pam)?;
        }
        Cmd::Homotopy(h) => {
            let pam = ctx.pam()?;
            match h {
                HomotopyCmd::Contract { config, t, len } => {
                    let eta = ctx.config(&config, &pam)?;
                    ctx.emit_config(&contract(&eta, t, len, &pam).map_err(domain)?, &pam)?;
                }
                HomotopyCmd::Push { config, t } => {
                    let eta = ctx.config(&config, &pam)?;
                    ctx.emit_config(&push_homotopy(&eta, t).map_err(domain)?, &pam)?;
                }
                HomotopyCmd::Base { sum, t } => {
                    let z = dsl::parse_bm(&sum, &pam)?;
                    ctx.say(dsl::print_bm(&base_homotopy(&z, t, &pam).map_err(domain)?, &pam).to_string());
                }
                HomotopyCmd::Cover { config, t, len } => {
                    let eta = ctx.config(&config, &pam)?;
                    let (out, s) = cover_homotopy(&eta, t, len, &pam).map_err(domain)?;
                    ctx.emit_config(&out, &pam)?;
                    ctx.note_len(s);
                }
            }
        }
        Cmd::Fiber(f) => {
            let pam = ctx.pam()?;
            match f {
                FiberCmd::Classify { config, z } => {
                    let eta = ctx.config(&config, &pam)?;
                    let z = dsl::parse_bm(&z, &pam)?;
                    let c = classify_fiber(&eta, &z, &pam);
                    match c.verdict {
                        Verdict::InH => ctx.say(format!("in-H alpha: {}", dsl::print_alpha(&c.alpha, &pam))),
                        Verdict::InF => ctx.say(format!("in-F alpha: {}", dsl::print_alpha(&c.alpha, &pam))),
                        Verdict::Neither => {
                            ctx.say("neither");
                            return Err(Failure::False);
                        }
                    }
                }
                FiberCmd::Cap { config, len } => {
                    let eta = ctx.config(&config, &pam)?;
                    let (z, xi, s) = cap_project(&eta, len, &pam).map_err(domain)?;
                    ctx.say(dsl::print_bm(&z, &pam).to_string());
                    ctx.emit_config(&xi, &pam)?;
                    ctx.note_len(s);
                }
                FiberCmd::Lift { config, z, len } => {
                    let xi = ctx.config(&config, &pam)?;
                    let z = dsl::parse_bm(&z, &pam)?;
                    let (eta, s) = standard_lift(&z, &xi, len, &pam).map_err(domain)?;
                    ctx.emit_config(&eta, &pam)?;
                    ctx.note_len(s);
                }
                FiberCmd::Retract { config, z, len } => {
                    let xi = ctx.config(&config, &pam)?;
                    let z = dsl::parse_bm(&z, &pam)?;
                    let (out, s) = retract_r(&xi, &z, len, &pam).map_err(domain)?;
                    ctx.emit_config(&out, &pam)?;
                    ctx.note_len(s);
                }
                FiberCmd::Glue { config, z, alpha, len } => {
                    let eta = ctx.config(&config, &pam)?;
                    let z = dsl::parse_bm(&z, &pam)?;
                    let alpha = dsl::parse_alpha(&alpha, &pam)?;
                    let (out, s) = glue_g(&eta, &alpha, &z, len, &pam).map_err(domain)?;
                    ctx.emit_config(&out, &pam)?;
                    ctx.note_len(s);
                }
            }
        }
    }
    Ok(())
}

/// Runs one command line; returns the exit code, stdout and stderr.
fn invoke<I, T>(args: I) -> (u8, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { (2, String::new(), text) } else { (0, text, String::new()) };
        }
    };
    let ctx = Ctx {
        pam: cli.pam,
        default_label: cli.default_label,
        svg: cli.svg,
        out: RefCell::default(),
        err: RefCell::default(),
    };
    let code = match run(cli.cmd, &ctx) {
        Ok(()) => 0,
        Err(Failure::False) => 1,
        Err(Failure::Parse(msg)) => {
            ctx.err.borrow_mut().push_str(&format!("error: {msg}\n"));
            2
        }
        Err(Failure::Domain(msg)) => {
            ctx.err.borrow_mut().push_str(&format!("error: {msg}\n"));
            3
        }
        Err(Failure::Unknown) => 4,
    };
    (code, ctx.out.into_inner(), ctx.err.into_inner())
}

fn main() -> ExitCode {
    let (code, out, err) = invoke(std::env::args_os());
    print!("{out}");
    eprint!("{err}");
    ExitCode::from(code)
}
