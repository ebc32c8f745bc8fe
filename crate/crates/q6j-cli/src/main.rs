use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use q6j::geometry::{classify_vertex, gram_det, sample_hyperbolic, volume};
use q6j::harness::{
    convergence_csv, extract_c1, fit_constant, integrate_gbar, poisson_csv, poisson_spectrum,
    scaled_gaps, C1Report, Plot,
};
use q6j::parse::{parse_angles, parse_spins};
use q6j::{sixj_rw, AngleSet, Level, Precision};
use rand::SeedableRng;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] q6j::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Prec {
    Double,
    Dd,
}

impl From<Prec> for Precision {
    fn from(p: Prec) -> Self {
        match p {
            Prec::Double => Precision::Double,
            Prec::Dd => Precision::DoubleDouble,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "q6j",
    version,
    about = "Quantum 6j symbols and their volume asymptotics"
)]
struct Cli {
    /// Accumulation precision for 6j sums.
    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "double",
        env = "Q6J_PRECISION"
    )]
    precision: Prec,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0, env = "Q6J_THREADS")]
    threads: usize,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 20260101, env = "Q6J_SEED")]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Single 6j symbols.
    #[command(subcommand)]
    Sixj(SixjCmd),
    /// Tetrahedron geometry.
    #[command(subcommand)]
    Tetra(TetraCmd),
    /// Asymptotic experiments.
    #[command(subcommand)]
    Asym(AsymCmd),
}

#[derive(Subcommand, Debug)]
enum SixjCmd {
    /// Evaluate {a b e; d c f} at level r.
    Eval {
        #[arg(long)]
        r: i64,
        /// a,b,e,d,c,f; half-integers as 1/2 or 0.5.
        #[arg(long, allow_hyphen_values = true)]
        spins: String,
    },
}

#[derive(Subcommand, Debug)]
enum TetraCmd {
    /// det G, vertex classes, ζ₀, volume and diagnostics.
    Analyze(Theta),
    /// Random hyperbolic angle sets from --seed.
    Sample {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Args, Debug)]
struct Theta {
    /// θ_a..θ_f in radians, or one value for the regular tetrahedron; "pi/3" and "0.08pi" work.
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
}

#[derive(Subcommand, Debug)]
enum AsymCmd {
    /// CSV convergence table over odd r from r-min, doubling (r → 2r − 1) unless --step is given.
    Converge {
        #[command(flatten)]
        theta: Theta,
        #[arg(long)]
        r_min: u32,
        #[arg(long)]
        r_max: u32,
        #[arg(long)]
        step: Option<u32>,
        /// Also write a gap-vs-r plot.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// JSON report with C₁ from the ladder {r0, 2r0−1, 4r0−3, 8r0−7}.
    C1 {
        #[command(flatten)]
        theta: Theta,
        #[arg(long, default_value_t = 201)]
        r_ladder: u32,
        /// Fail when the ladder spread exceeds this.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Im C₁ over a range of regular angles (multiples of π), as CSV and optional SVG.
    C1Sweep {
        #[arg(long, allow_hyphen_values = true, default_value_t = -0.3)]
        from: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.3)]
        to: f64,
        #[arg(long, default_value_t = 13)]
        points: usize,
        #[arg(long, default_value_t = 201)]
        r_ladder: u32,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// CSV of f̂(m) for |m| ≤ m-max.
    Poisson {
        #[command(flatten)]
        theta: Theta,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 2)]
        m_max: i64,
    },
    /// Quadrature of ḡ_r against the stationary-phase closed form.
    Gbar {
        #[command(flatten)]
        theta: Theta,
        #[arg(long)]
        r: u32,
    },
}

fn r_list(r_min: u32, r_max: u32, step: Option<u32>) -> Result<Vec<u32>> {
    if r_min < 3 || r_min.is_multiple_of(2) || r_max < r_min {
        return Err(CliError::Usage(
            "need odd r-min ≥ 3 and r-max ≥ r-min".into(),
        ));
    }
    let mut v = vec![r_min];
    loop {
        let last = *v.last().unwrap_or(&r_min);
        let next = match step {
            Some(s) if s.is_multiple_of(2) && s > 0 => last + s,
            Some(_) => {
                return Err(CliError::Usage(
                    "--step must be a positive even number".into(),
                ))
            }
            None => 2 * last - 1,
        };
        if next > r_max {
            return Ok(v);
        }
        v.push(next);
    }
}

fn run(cli: &Cli) -> Result<String> {
    let prec: Precision = cli.precision.into();
    Ok(match &cli.cmd {
        Cmd::Sixj(SixjCmd::Eval { r, spins }) => {
            let level = Level::with_precision(*r, prec)?;
            let s = parse_spins(spins)?;
            let v = sixj_rw(&level, &s)?;
            let z = v.complex();
            let mut o = String::new();
            match z {
                Some(z) => o += &format!("value = {:.17e} {:+.17e}i\n", z.re, z.im),
                None => o += "value = (outside f64 range)\n",
            }
            o += &format!("logmag = {:.17e}\n", v.logmag);
            o += &format!(
                "phase = i^{}\nsign = {}\n",
                v.quarter_turns,
                if v.quarter_turns % 2 == 0 {
                    "real"
                } else {
                    "imaginary"
                }
            );
            o += &format!(
                "terms = {}, same_sign = {}, zero = {}\n",
                v.n_terms, v.same_sign, v.is_zero
            );
            o
        }
        Cmd::Tetra(TetraCmd::Analyze(t)) => {
            let a = parse_angles(&t.theta)?;
            let mut o = format!("det_g = {:.17e}\n", gram_det(&a));
            for v in 0..4 {
                o += &format!("vertex {} = {:?}\n", v + 1, classify_vertex(&a, v));
            }
            match volume(&a) {
                Ok(vd) => {
                    o += &format!(
                        "zeta0 = {:.17e}\nvol = {:.17e}\n",
                        vd.stationary.zeta0, vd.vol
                    );
                    o += &format!(
                        "im_part = {:.17e}\nF_zz = {:.17e} {:+.17e}i\n",
                        vd.im_part, vd.stationary.fpp.re, vd.stationary.fpp.im
                    );
                    o += &format!("window = {:?}\n", a.window());
                }
                Err(e) => o += &format!("volume: {e}\n"),
            }
            o
        }
        Cmd::Tetra(TetraCmd::Sample { count }) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
            let mut o = String::new();
            for _ in 0..*count {
                let a = sample_hyperbolic(&mut rng);
                let v: Vec<String> = a.theta.iter().map(|x| format!("{x:.17}")).collect();
                o += &format!("{}\n", v.join(","));
            }
            o
        }
        Cmd::Asym(AsymCmd::Converge {
            theta,
            r_min,
            r_max,
            step,
            svg,
        }) => {
            let a = parse_angles(&theta.theta)?;
            let rows = q6j::harness::convergence_table(&a, &r_list(*r_min, *r_max, *step)?, prec)?;
            if let Some(path) = svg {
                let gaps = rows.iter().map(|x| (x.r as f64, x.gap)).collect();
                let scaled = rows
                    .iter()
                    .zip(scaled_gaps(&rows))
                    .map(|(x, g)| (x.r as f64, g / 10.0))
                    .collect();
                let plot = Plot {
                    title: "gap |(2π/r) log|6j| − Vol|",
                    x_label: "r",
                    y_label: "gap",
                    series: vec![("gap".into(), gaps), ("gap·r/(10 ln r)".into(), scaled)],
                };
                std::fs::write(path, plot.to_svg())?;
            }
            convergence_csv(&rows)?
        }
        Cmd::Asym(AsymCmd::C1 {
            theta,
            r_ladder,
            tol,
        }) => {
            let a = parse_angles(&theta.theta)?;
            let geo = volume(&a)?;
            let cf = fit_constant(&a, *r_ladder, prec)?;
            let c1 = extract_c1(&a, *r_ladder, prec, *tol)?;
            C1Report::new(&a, &geo, cf, &c1).to_json()
        }
        Cmd::Asym(AsymCmd::C1Sweep {
            from,
            to,
            points,
            r_ladder,
            svg,
        }) => {
            let n = (*points).max(2);
            let mut o = String::from("theta_over_pi,c1_im,c1_err\n");
            let mut pts = Vec::new();
            for i in 0..n {
                let t = from + (to - from) * i as f64 / (n - 1) as f64;
                let c = extract_c1(&AngleSet::regular(t * PI)?, *r_ladder, prec, None)?;
                o += &format!(
                    "{},{},{}\n",
                    q6j::harness::num(t),
                    q6j::harness::num(c.im),
                    q6j::harness::num(c.err)
                );
                pts.push((t, c.im));
            }
            if let Some(path) = svg {
                let plot = Plot {
                    title: "Im C₁ of the regular tetrahedron",
                    x_label: "θ/π",
                    y_label: "Im C₁",
                    series: vec![("Im C₁".into(), pts)],
                };
                std::fs::write(path, plot.to_svg())?;
            }
            o
        }
        Cmd::Asym(AsymCmd::Poisson { theta, r, m_max }) => {
            let a = parse_angles(&theta.theta)?;
            let m: Vec<i64> = (-m_max.abs()..=m_max.abs()).collect();
            poisson_csv(&poisson_spectrum(&a, *r, &m)?)
        }
        Cmd::Asym(AsymCmd::Gbar { theta, r }) => {
            let a = parse_angles(&theta.theta)?;
            let g = integrate_gbar(&a, *r)?;
            format!(
                "ratio = {:.17e}\nlog_integral = {:.17e}\nlog_closed_form = {:.17e}\nlog_recont = {:.17e}\nquad_err = {:.3e}\n",
                g.ratio, g.log_integral, g.log_closed_form, g.log_recont, g.quad_err
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: {}", CliError::Pool(e.to_string()));
            return ExitCode::FAILURE;
        }
    }
    let out = run(&cli).and_then(|s| {
        match &cli.out {
            Some(p) => std::fs::write(p, s)?,
            None => std::io::stdout().write_all(s.as_bytes())?,
        }
        Ok(())
    });
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_ladder() {
        assert_eq!(
            r_list(101, 1601, None).unwrap(),
            vec![101, 201, 401, 801, 1601]
        );
        assert_eq!(r_list(5, 11, Some(2)).unwrap(), vec![5, 7, 9, 11]);
        assert!(r_list(100, 200, None).is_err());
        assert!(r_list(5, 11, Some(3)).is_err());
    }

    #[test]
    fn cli_parses() {
        Cli::try_parse_from(["q6j", "sixj", "eval", "--r", "7", "--spins", "1,1,1,1,1,1"]).unwrap();
        Cli::try_parse_from([
            "q6j",
            "--precision",
            "dd",
            "asym",
            "c1",
            "--theta",
            "-0.08pi",
        ])
        .unwrap();
        assert!(Cli::try_parse_from(["q6j", "asym", "poisson", "--theta", "pi/4"]).is_err());
    }
}
