mod io;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use homfill_core::cayley::{h1_evidence, relative_cayley_complex, CayleyBall};
use homfill_core::complex::{parse_signed_token, ChainVec};
use homfill_core::cube::{fellow_travel, fill_loop_cubical, geodesic_cube_paths, normal_cube_path, CubeBall};
use homfill_core::filling::{
    delta_ab_table, fa_table, harea_many, superadditive_closure, FaMode, FillingTable, HareaOptions, TableOptions,
};
use homfill_core::filling::tables::par_map;
use homfill_core::flag::spherical_double;
use homfill_core::leary::{leary_presentation, raag_presentation, salvetti_two_skeleton};
use homfill_core::library::Builtin;
use homfill_core::small_cancellation::{c_prime_check, Ratio};
use homfill_core::word::{alphabet, Letter};
use homfill_core::{Error, Result, Word};
use io::{envelope, oracle, parse_list, Inputs, Source};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "homfill", version, about = "Homological filling functions, flag complexes and cube paths")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for independent harea and path queries.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Seed for randomly generated test data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Ball vertex budget.
    #[arg(long, global = true, default_value_t = 200_000)]
    budget: usize,
    /// Search node budget for each harea query.
    #[arg(long, global = true, default_value_t = 50_000_000)]
    max_nodes: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
struct Group {
    #[command(flatten)]
    source: Source,
    /// Oracle spec JSON file or literal, e.g. '{"kind":"free-abelian"}'.
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(clap::Args, Debug)]
struct Ball {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    radius: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integral homology in degrees 0, 1, 2.
    Homology {
        #[command(flatten)]
        source: Source,
    },
    /// Euler characteristic.
    Euler {
        #[command(flatten)]
        source: Source,
    },
    /// Homological area of loops in a Cayley ball, or of a 1-cycle in a complex.
    Harea {
        #[command(flatten)]
        group: Group,
        #[arg(long)]
        radius: Option<usize>,
        /// Loop at the identity; repeatable.
        #[arg(long = "word")]
        words: Vec<String>,
        /// Signed edge ids of a 1-cycle, e.g. "e1 e2 -e3"; used with --complex.
        #[arg(long)]
        cycle: Option<String>,
    },
    /// Table of the abelianised Dehn function.
    DeltaAb {
        #[command(flatten)]
        group: Group,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        radius: usize,
    },
    /// Table of the homological filling function.
    FaTable {
        #[command(flatten)]
        group: Group,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = Mode::Closure)]
        mode: Mode,
    },
    /// Superadditive closure of a table of values.
    SuperaddClosure {
        #[arg(long)]
        values: String,
    },
    /// Flag, connectivity and local cut point report.
    CheckFlag {
        #[command(flatten)]
        source: Source,
    },
    SphericalDouble {
        #[command(flatten)]
        source: Source,
    },
    /// Right-angled Artin group presentation.
    RaagPres {
        #[command(flatten)]
        source: Source,
    },
    /// 2-skeleton of the Salvetti complex with edge heights.
    Salvetti {
        #[command(flatten)]
        source: Source,
    },
    LearyPres {
        #[command(flatten)]
        source: Source,
        /// Comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// C'(λ) small-cancellation check.
    CheckC16 {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "1/6")]
        lambda: String,
    },
    /// Print a built-in object.
    Builtin {
        #[command(flatten)]
        source: Source,
    },
    /// Ball in the universal cover of the Salvetti complex.
    CubeBall {
        #[command(flatten)]
        ball: Ball,
        /// Also list hyperplanes.
        #[arg(long)]
        hyperplanes: bool,
    },
    /// Normal cube-path between two vertices.
    CubePath {
        #[command(flatten)]
        ball: Ball,
        #[arg(long, default_value = "1")]
        from: String,
        #[arg(long)]
        to: String,
        /// Also enumerate every cube-path with Σ dim = d, up to this many.
        #[arg(long)]
        all: Option<usize>,
    },
    /// Fellow-travel diagram for a step w′ → w.
    FellowTravel {
        #[command(flatten)]
        ball: Ball,
        #[arg(long, default_value = "1")]
        v: String,
        #[arg(long)]
        w_prime: Option<String>,
        #[arg(long)]
        w: Option<String>,
        /// Carried geodesic from v to w′; defaults to the normal cube-path's.
        #[arg(long)]
        rho: Option<String>,
        /// Run this many random triples instead.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Full, ascending and descending links at a vertex.
    MorseLinks {
        #[command(flatten)]
        ball: Ball,
        #[arg(long, default_value = "1")]
        vertex: String,
    },
    /// Disk diagram for a loop by iterated fellow-travelling.
    FillLoop {
        #[command(flatten)]
        ball: Ball,
        #[arg(long, default_value = "1")]
        base: String,
        #[arg(long = "loop")]
        alpha: Option<String>,
        /// Fill this many random loops of length --length instead.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 8)]
        length: usize,
    },
    /// Evidence that H₁ of the Cayley complex vanishes.
    H1Evidence {
        #[command(flatten)]
        group: Group,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        max_len: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Closure,
    Direct,
}

enum Output {
    Json(Value),
    Text(String),
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Homology { .. } => "homology",
        Command::Euler { .. } => "euler",
        Command::Harea { .. } => "harea",
        Command::DeltaAb { .. } => "delta-ab",
        Command::FaTable { .. } => "fa-table",
        Command::SuperaddClosure { .. } => "superadd-closure",
        Command::CheckFlag { .. } => "check-flag",
        Command::SphericalDouble { .. } => "spherical-double",
        Command::RaagPres { .. } => "raag-pres",
        Command::Salvetti { .. } => "salvetti",
        Command::LearyPres { .. } => "leary-pres",
        Command::CheckC16 { .. } => "check-c16",
        Command::Builtin { .. } => "builtin",
        Command::CubeBall { .. } => "cube-ball",
        Command::CubePath { .. } => "cube-path",
        Command::FellowTravel { .. } => "fellow-travel",
        Command::MorseLinks { .. } => "morse-links",
        Command::FillLoop { .. } => "fill-loop",
        Command::H1Evidence { .. } => "h1-evidence",
    }
}

fn is_table(c: &Command) -> bool {
    matches!(c, Command::DeltaAb { .. } | Command::FaTable { .. } | Command::SuperaddClosure { .. })
}

fn positive(what: &str, x: usize) -> Result<()> {
    if x == 0 {
        return Err(Error::input(format!("{what} must be positive")));
    }
    Ok(())
}

fn table_output(t: &FillingTable, io: &Inputs, cmd: &str, csv: bool) -> Output {
    if csv {
        Output::Text(format!("{}\n{}", io.header_line(cmd), t.to_csv()))
    } else {
        let entries: Vec<Value> =
            t.entries.iter().map(|e| json!({"n": e.n, "value": e.value, "status": e.status, "witness": e.witness})).collect();
        Output::Json(envelope(io, cmd, json!({"kind": format!("{:?}", t.kind), "entries": entries, "note": t.note})))
    }
}

fn cube_ball(io: &mut Inputs, ball: &Ball, budget: usize) -> Result<CubeBall> {
    let l = ball.source.flag(io)?;
    io.param("radius", &ball.radius.to_string());
    CubeBall::build_with_budget(&l, ball.radius, budget)
}

fn random_loop(rng: &mut ChaCha8Rng, ngens: usize, len: usize) -> Word {
    let letters = alphabet(ngens);
    let half: Vec<Letter> = (0..len / 2).map(|_| *letters.choose(rng).expect("nonempty alphabet")).collect();
    let mut all: Vec<Letter> = half.iter().copied().chain(half.iter().map(|&x| -x)).collect();
    all.shuffle(rng);
    Word::new(all)
}

fn run(cli: &Cli, io: &mut Inputs) -> Result<Output> {
    let cmd = name(&cli.command);
    let csv = match cli.format {
        Some(Format::Csv) if !is_table(&cli.command) => return Err(Error::input(format!("{cmd} has no CSV output"))),
        Some(f) => f == Format::Csv,
        None => is_table(&cli.command),
    };
    positive("--jobs", cli.jobs)?;
    positive("--budget", cli.budget)?;
    if cli.max_nodes == 0 {
        return Err(Error::input("--max-nodes must be positive"));
    }
    let topts = TableOptions { jobs: cli.jobs, max_nodes: cli.max_nodes, vertex_budget: cli.budget };
    let json_out = |io: &Inputs, body: Value| Ok(Output::Json(envelope(io, cmd, body)));
    match &cli.command {
        Command::Homology { source } => {
            let x = source.two_complex(io)?;
            let h = x.homology();
            json_out(io, json!({"homology": h, "acyclic": h.is_acyclic(), "eulerCharacteristic": x.euler_characteristic()}))
        }
        Command::Euler { source } => {
            let x = source.two_complex(io)?;
            json_out(io, json!({"eulerCharacteristic": x.euler_characteristic()}))
        }
        Command::Harea { group, radius, words, cycle } => {
            let opts = HareaOptions { max_nodes: cli.max_nodes, ..HareaOptions::default() };
            if let Some(c) = cycle {
                if group.source.complex.is_none() {
                    return Err(Error::input("--cycle needs --complex"));
                }
                let x = group.source.two_complex(io)?;
                io.param("cycle", c);
                let mut gamma = ChainVec::zero(1);
                for t in c.split_whitespace() {
                    let (id, fwd) = parse_signed_token(t);
                    if x.edge_idx(&id).is_none() {
                        return Err(Error::input(format!("unknown edge {id:?}")));
                    }
                    gamma.add_term(&id, if fwd { 1 } else { -1 });
                }
                let cert = harea_many(&x, &[gamma], &opts, 1)?.remove(0);
                return json_out(io, json!({"certificates": [cert.to_json()]}));
            }
            let radius = radius.ok_or_else(|| Error::input("--radius is required"))?;
            if words.is_empty() {
                return Err(Error::input("give at least one --word or a --cycle"));
            }
            let p = group.source.presentation(io)?;
            let o = oracle(io, group.oracle.as_deref(), &p)?;
            io.param("radius", &radius.to_string());
            io.param("words", &words.join("\n"));
            let ball = CayleyBall::build_with_budget(&p, &o, radius, cli.budget)?;
            let x = relative_cayley_complex(&ball, p.relators())?.complex;
            let mut cycles = Vec::new();
            for w in words {
                let word = p.parse_word(w)?;
                let c = ball.walk_chain(0, &word).ok_or_else(|| Error::Radius { required: word.len(), actual: radius })?;
                cycles.push(c);
            }
            let opts = HareaOptions { complete: ball.is_complete(), support_radius: Some(radius), ..opts };
            let certs = harea_many(&x, &cycles, &opts, cli.jobs)?;
            let out: Vec<Value> = words
                .iter()
                .zip(&certs)
                .map(|(w, c)| {
                    let mut v = c.to_json();
                    v["word"] = json!(w);
                    v
                })
                .collect();
            json_out(io, json!({"certificates": out}))
        }
        Command::DeltaAb { group, n_max, radius } => {
            positive("--n-max", *n_max)?;
            let p = group.source.presentation(io)?;
            let o = oracle(io, group.oracle.as_deref(), &p)?;
            io.param("nMax", &n_max.to_string());
            io.param("radius", &radius.to_string());
            let t = delta_ab_table(&p, &o, *n_max, *radius, &topts)?;
            Ok(table_output(&t, io, cmd, csv))
        }
        Command::FaTable { group, n_max, radius, mode } => {
            positive("--n-max", *n_max)?;
            let p = group.source.presentation(io)?;
            let o = oracle(io, group.oracle.as_deref(), &p)?;
            io.param("nMax", &n_max.to_string());
            io.param("radius", &radius.to_string());
            io.param("mode", &format!("{mode:?}"));
            let mode = match mode {
                Mode::Closure => FaMode::ViaClosure,
                Mode::Direct => FaMode::DirectCycles,
            };
            let t = fa_table(&p, &o, *n_max, *radius, mode, &topts)?;
            Ok(table_output(&t, io, cmd, csv))
        }
        Command::SuperaddClosure { values } => {
            let v: Vec<u64> = parse_list("--values", values)?;
            if v.is_empty() {
                return Err(Error::input("--values needs at least one value"));
            }
            io.param("values", values);
            let c = superadditive_closure(&v);
            if csv {
                let line: Vec<String> = c.iter().map(u64::to_string).collect();
                Ok(Output::Text(format!("{}\n{}\n", io.header_line(cmd), line.join(","))))
            } else {
                json_out(io, json!({"values": v, "closure": c}))
            }
        }
        Command::CheckFlag { source } => {
            let l = source.flag(io)?;
            json_out(io, serde_json::to_value(l.report()).expect("report serialises"))
        }
        Command::SphericalDouble { source } => {
            let l = source.flag(io)?;
            let d = spherical_double(&l);
            json_out(io, json!({"complex": d.to_json(), "fVector": d.f_vector(), "inputFVector": l.f_vector()}))
        }
        Command::RaagPres { source } => {
            let l = source.flag(io)?;
            let p = raag_presentation(&l)?;
            json_out(io, json!({"presentation": p.to_json()}))
        }
        Command::Salvetti { source } => {
            let l = source.flag(io)?;
            let s = salvetti_two_skeleton(&l)?;
            json_out(
                io,
                json!({"complex": s.complex.to_json(), "edgeHeights": s.edge_heights, "homology": s.complex.homology()}),
            )
        }
        Command::LearyPres { source, s } => {
            let l = source.flag(io)?;
            let set: Vec<i64> = parse_list("--s", s)?;
            io.param("s", s);
            let lp = leary_presentation(&l, &set)?;
            let mut v = serde_json::to_value(&lp).expect("Leary presentation serialises");
            v["presentation"] = serde_json::to_value(lp.presentation.to_json()).expect("presentation serialises");
            json_out(io, v)
        }
        Command::CheckC16 { source, lambda } => {
            let p = source.presentation(io)?;
            let r = Ratio::parse(lambda)?;
            io.param("lambda", lambda);
            let report = c_prime_check(&p, r);
            json_out(io, serde_json::to_value(report).expect("report serialises"))
        }
        Command::Builtin { source } => {
            let name = source.builtin.as_deref().ok_or_else(|| Error::input("--builtin is required"))?;
            let body = match io.builtin(name, source.m)? {
                Builtin::Presentation(p) => json!({"presentation": p.to_json()}),
                Builtin::Flag { complex, bold_edge } => json!({"flagComplex": complex.to_json(), "boldEdge": bold_edge}),
                Builtin::Complex(x) => json!({"complex": x.to_json()}),
            };
            json_out(io, body)
        }
        Command::CubeBall { ball, hyperplanes } => {
            let b = cube_ball(io, ball, cli.budget)?;
            let mut v = b.to_json();
            if *hyperplanes {
                v["hyperplanes"] = homfill_core::cube::hyperplane::hyperplanes(&b).to_json(&b);
            }
            json_out(io, v)
        }
        Command::CubePath { ball, from, to, all } => {
            let b = cube_ball(io, ball, cli.budget)?;
            io.param("from", from);
            io.param("to", to);
            let (v, w) = (b.vertex(from)?, b.vertex(to)?);
            let p = normal_cube_path(&b, v, w)?;
            let mut out = json!({"distance": b.distance(v, w), "path": p.to_json(&b)});
            if let Some(limit) = all {
                positive("--all", *limit)?;
                let paths = geodesic_cube_paths(&b, v, w, *limit)?;
                out["normalCount"] = json!(paths.iter().filter(|q| q.normal).count());
                out["all"] = Value::Array(paths.iter().map(|q| q.to_json(&b)).collect());
            }
            json_out(io, out)
        }
        Command::FellowTravel { ball, v, w_prime, w, rho, random } => {
            let b = cube_ball(io, ball, cli.budget)?;
            if let Some(count) = random {
                io.param("random", &format!("{count} seed {}", cli.seed));
                return json_out(io, random_fellow_travel(&b, *count, cli.seed, cli.jobs)?);
            }
            let (Some(wp), Some(w)) = (w_prime, w) else {
                return Err(Error::input("--w-prime and --w are required without --random"));
            };
            io.param("v", v);
            io.param("wPrime", wp);
            io.param("w", w);
            let (v, wp, w) = (b.vertex(v)?, b.vertex(wp)?, b.vertex(w)?);
            let rho = match rho {
                Some(r) => {
                    io.param("rho", r);
                    b.presentation().parse_word(r)?
                }
                None => normal_cube_path(&b, v, wp)?.carried_geodesic(),
            };
            let ft = fellow_travel(&b, v, wp, w, &rho)?;
            json_out(io, json!({"rho": rho.render(b.presentation().generators()), "fellowTravel": ft.to_json(&b)}))
        }
        Command::MorseLinks { ball, vertex } => {
            let b = cube_ball(io, ball, cli.budget)?;
            io.param("vertex", vertex);
            let v = b.vertex(vertex)?;
            let m = b.morse_links(v)?;
            json_out(
                io,
                json!({
                    "vertex": b.id(v),
                    "height": b.height(v),
                    "full": m.full.to_json(),
                    "ascending": m.ascending.to_json(),
                    "descending": m.descending.to_json(),
                    "fVectors": {"full": m.full.f_vector(), "ascending": m.ascending.f_vector(), "descending": m.descending.f_vector()},
                }),
            )
        }
        Command::FillLoop { ball, base, alpha, random, length } => {
            let b = cube_ball(io, ball, cli.budget)?;
            io.param("base", base);
            let base = b.vertex(base)?;
            let loops = match (alpha, random) {
                (Some(a), None) => {
                    io.param("loop", a);
                    vec![b.presentation().parse_word(a)?]
                }
                (None, Some(count)) => {
                    io.param("random", &format!("{count} length {length} seed {}", cli.seed));
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    (0..*count).map(|_| random_loop(&mut rng, b.presentation().ngens(), *length)).collect()
                }
                _ => return Err(Error::input("give exactly one of --loop and --random")),
            };
            let results = par_map(&loops, cli.jobs, |a| fill_loop_cubical(&b, base, a));
            let mut out = Vec::with_capacity(loops.len());
            for (a, r) in loops.iter().zip(results) {
                let mut v = r?.to_json();
                v["loop"] = json!(a.render(b.presentation().generators()));
                out.push(v);
            }
            if alpha.is_some() {
                json_out(io, out.remove(0))
            } else {
                let all = out.iter().all(|v| v["boundsHold"] == json!(true));
                json_out(io, json!({"allBoundsHold": all, "fillings": out}))
            }
        }
        Command::H1Evidence { group, radius, max_len } => {
            let p = group.source.presentation(io)?;
            let o = oracle(io, group.oracle.as_deref(), &p)?;
            io.param("radius", &radius.to_string());
            io.param("maxLen", &max_len.to_string());
            let e = h1_evidence(&p, &o, *radius, *max_len)?;
            json_out(io, serde_json::to_value(e).expect("evidence serialises"))
        }
    }
}

/// Random `(v, w′, w)` with `v` the identity-adjacent start, `w′` within
/// distance 3 and `w` a neighbour of `w′`.
fn random_fellow_travel(b: &CubeBall, count: usize, seed: u64, jobs: usize) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = alphabet(b.presentation().ngens());
    let mut triples = Vec::with_capacity(count);
    for _ in 0..count {
        let len = rng.gen_range(0..=3);
        let word = Word::new((0..len).map(|_| *letters.choose(&mut rng).expect("nonempty")).collect());
        let x = *letters.choose(&mut rng).expect("nonempty");
        let wp = *b.walk(0, &word).ok_or(Error::Radius { required: len, actual: b.radius() })?.last().expect("nonempty");
        let w = b.step(wp, x).ok_or(Error::Radius { required: len + 1, actual: b.radius() })?;
        triples.push((wp, w));
    }
    let results = par_map(&triples, jobs, |&(wp, w)| -> Result<Value> {
        let rho = normal_cube_path(b, 0, wp)?.carried_geodesic();
        let ft = fellow_travel(b, 0, wp, w, &rho)?;
        Ok(json!({"wPrime": b.id(wp), "w": b.id(w), "type": ft.kind, "strip": ft.strip, "hausdorff": ft.hausdorff}))
    });
    let mut counts = [0usize; 4];
    let mut out = Vec::with_capacity(count);
    for r in results {
        let v = r?;
        counts[v["type"].as_u64().expect("type") as usize - 1] += 1;
        out.push(v);
    }
    Ok(json!({"countsByType": counts, "triples": out}))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Radius { .. } => 2,
        Error::Resource { .. } => 3,
        Error::Construction(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut io = Inputs::default();
    let text = match run(&cli, &mut io) {
        Ok(Output::Json(v)) => format!("{}\n", serde_json::to_string_pretty(&v).expect("JSON serialises")),
        Ok(Output::Text(t)) => t,
        Err(e) => {
            eprintln!("error {}: {}", e.code(), e.to_string().replace('\n', " "));
            return ExitCode::from(exit_code(&e));
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error invalid-input: cannot write {path:?}: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
