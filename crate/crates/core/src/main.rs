use clap::{Parser, ValueEnum};
use g2torsion::cli::{run, Mode, Request, EXIT_INVALID};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Analyze,
    Ss,
    Curve,
    Pairing,
    Search,
    Example9,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Analyze => Mode::Analyze,
            ModeArg::Ss => Mode::Ss,
            ModeArg::Curve => Mode::Curve,
            ModeArg::Pairing => Mode::Pairing,
            ModeArg::Search => Mode::Search,
            ModeArg::Example9 => Mode::Example9,
        }
    }
}

/// ℓ-torsion of genus-2 Jacobians over finite fields.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    mode: ModeArg,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    a: u32,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<i64>,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 4)]
    max_ext: u32,
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long, default_value_t = 10)]
    limit: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of a table.
    #[arg(long)]
    json: bool,
    /// Curve description (JSON).
    #[arg(long)]
    file: Option<String>,
}

fn main() {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    let mode: Mode = args.mode.into();
    let mut req = Request { mode: Some(mode), seed: args.seed, p: args.p, s: args.s, t: args.t, ell: args.ell, ..Default::default() };
    match mode {
        Mode::Analyze => {
            req.a = Some(args.a);
            req.m = Some(args.m);
        }
        Mode::Ss | Mode::Search => req.a = Some(args.a),
        Mode::Curve => req.max_ext = Some(args.max_ext),
        Mode::Pairing => req.degree = args.degree,
        Mode::Example9 => {}
    }
    if mode == Mode::Search {
        req.limit = Some(args.limit);
    }
    if matches!(mode, Mode::Curve | Mode::Pairing) {
        req.file = args.file;
    }
    let env = run(&req);
    if args.json {
        println!("{}", env.to_json_string());
    } else {
        print!("{}", env.to_table());
    }
    std::process::exit(env.exit);
}
