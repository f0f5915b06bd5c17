//! `altbase`: command-line front end. Every command prints one JSON object
//! `{command, inputs, payload, status}` and exits with `status`.

use std::process::ExitCode;

use altbase::admissibility::is_admissible;
use altbase::base::{make_base, AlternateBase, BaseConfig};
use altbase::certify::{
    classify_field, finiteness_sample_check, periodicity_certificate, positivity_report, prefix_rationals,
    pure_periodic_identity_check,
};
use altbase::exactnum::Rational;
use altbase::expansion::{
    block_decode, block_encode, expand_nonneg, expansion_of_one, greedy_expand, pointed_value, quasi_greedy_one,
    value_of, DigitWord, ExpansionKind, PointedWord, DEFAULT_CAP,
};
use altbase::numberfield::FieldElement;
use altbase::ppfamily::{gamma_scan, pp_rewrite};
use altbase::Error;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

const DEFAULT_DEPTH: usize = 1000;

#[derive(Parser)]
#[command(name = "altbase", version, about = "Exact expansions in alternate bases")]
struct Cli {
    /// Maximum number of greedy digit steps before a run is reported as truncated.
    #[arg(long, global = true, env = "ALTBASE_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Digits of a quasi-greedy expansion computed before comparisons give up.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
    /// Emit JSON (the only output format).
    #[arg(long, global = true)]
    json: bool,
    /// Include per-step rewrite traces.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Greedy expansion of x (a pointed expansion when x >= 1).
    Expand {
        /// `pp:m`, `pp:m,shiftK` or `file:<path>`
        #[arg(long)]
        base: String,
        /// `p/q`, or power-basis coordinates `c0,c1,...` in δ
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// d(1) and d*(1) for every shift of the base.
    One {
        #[arg(long)]
        base: String,
    },
    /// Whether a word is the greedy expansion of some x in [0, 1).
    Admissible {
        #[arg(long)]
        base: String,
        #[arg(long)]
        word: String,
    },
    /// Algebraic type of δ, conjugate signs of the betas, expansions of 1.
    Classify {
        #[arg(long)]
        base: String,
    },
    /// Matrix certificate for p rationals with closing expansions.
    Certify {
        #[arg(long)]
        base: String,
        /// Rationals in [0, 1); repeat once per beta. Generated when omitted.
        #[arg(long = "x")]
        xs: Vec<String>,
        /// Length in blocks of the prefixes used to generate rationals.
        #[arg(long, default_value_t = 3)]
        prefix_blocks: usize,
    },
    /// Exact value of a word (or of a pointed word `int.frac`).
    Value {
        #[arg(long)]
        base: String,
        #[arg(long)]
        word: String,
    },
    /// Regroup a word into δ-digits and back.
    Convert {
        #[arg(long)]
        base: String,
        #[arg(long)]
        word: String,
    },
    /// Rewrite the δ-expansion of a rational into its expansion in the family base.
    PpRewrite {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        x: String,
    },
    /// Scan rationals upwards until one is not purely periodic.
    GammaScan {
        #[arg(long)]
        base: String,
        #[arg(long)]
        qmax: u64,
    },
    /// Sample sums and differences of finite expansions.
    FCheck {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// A failed command: exit 1 for domain errors, 2 for malformed input.
enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<Value, Failure>;

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn base_ref(s: &str) -> Result<BaseConfig, Failure> {
    if let Some(rest) = s.strip_prefix("pp:") {
        let (m, shift) = match rest.split_once(',') {
            Some((m, k)) => {
                let k = k.strip_prefix("shift").ok_or_else(|| Failure::Usage(format!("bad shift in {s:?}")))?;
                let k: usize = k.parse().map_err(|_| Failure::Usage(format!("bad shift in {s:?}")))?;
                (m, Some(k))
            }
            None => (rest, None),
        };
        let m: u32 = m.parse().map_err(|_| Failure::Usage(format!("bad family parameter in {s:?}")))?;
        if m == 0 {
            return Err(Failure::Usage("family parameter must be at least 1".into()));
        }
        Ok(BaseConfig::Family { pp_family: m, shift })
    } else if let Some(path) = s.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
        BaseConfig::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))
    } else {
        Err(Failure::Usage(format!("base must be pp:m, pp:m,shiftK or file:<path>, got {s:?}")))
    }
}

fn load_base(s: &str) -> Result<AlternateBase, Failure> {
    let cfg = base_ref(s)?;
    if let BaseConfig::Family { shift: Some(k), .. } = cfg {
        if !(1..=2).contains(&k) {
            return Err(Failure::Usage(format!("shift must be 1 or 2 for the family, got {k}")));
        }
    }
    Ok(make_base(&cfg)?)
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    s.trim().parse().map_err(|_| Failure::Usage(format!("cannot parse rational {s:?}")))
}

fn parse_element(base: &AlternateBase, s: &str) -> Result<FieldElement, Failure> {
    let field = base.field();
    if s.contains(',') {
        let coords = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
        if coords.len() > field.degree() {
            return Err(Failure::Usage(format!("{} coordinates given, field has degree {}", coords.len(), field.degree())));
        }
        Ok(FieldElement::from_coords(field, coords)?)
    } else {
        Ok(FieldElement::from_rational(field, parse_rational(s)?))
    }
}

fn parse_word(s: &str) -> Result<DigitWord, Failure> {
    s.parse().map_err(|_| Failure::Usage(format!("cannot parse word {s:?}")))
}

fn kind_of(w: &DigitWord) -> ExpansionKind {
    if w.is_finite() {
        ExpansionKind::Finite
    } else if w.is_purely_periodic() {
        ExpansionKind::PurelyPeriodic
    } else {
        ExpansionKind::EventuallyPeriodic
    }
}

fn parse_pointed(s: &str) -> Result<PointedWord, Failure> {
    let (int, frac) = s.split_once('.').expect("caller checked for a radix point");
    let integer_part = if int == "0" || int.is_empty() {
        Vec::new()
    } else {
        int.split(',')
            .map(|d| d.trim().parse().map_err(|_| Failure::Usage(format!("cannot parse word {s:?}"))))
            .collect::<Result<_, _>>()?
    };
    let fractional_part = parse_word(frac)?;
    let kind = kind_of(&fractional_part);
    Ok(PointedWord { integer_part, fractional_part, kind })
}

fn serialize<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn render_element(x: &FieldElement) -> String {
    if let Some(q) = x.as_rational() {
        return q.to_string();
    }
    let terms: Vec<String> = x
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| match i {
            0 => c.to_string(),
            1 => format!("{c}*d"),
            _ => format!("{c}*d^{i}"),
        })
        .collect();
    terms.join(" + ")
}

fn element_json(x: &FieldElement) -> Value {
    json!({
        "value": render_element(x),
        "coords": x.coord_strings(),
        "is_rational": x.as_rational().is_some(),
        "value_approx": x.approx(),
    })
}

fn cmd_expand(cli: &Cli, base: &str, x: &str) -> Outcome {
    let base = load_base(base)?;
    let x = parse_element(&base, x)?;
    if x.add_rational(&-Rational::one()).sign() >= 0 {
        let w = expand_nonneg(&base, &x, cli.cap)?;
        Ok(json!({
            "word": w.to_string(),
            "kind": w.kind,
            "integer_part": w.integer_part,
            "fractional_part": w.fractional_part,
            "radix_blocks": w.blocks(base.period()),
        }))
    } else {
        Ok(serialize(&greedy_expand(&base, &x, cli.cap)?))
    }
}

fn ones(cli: &Cli, base: &AlternateBase) -> Vec<Value> {
    (1..=base.period())
        .map(|i| {
            let shifted = base.shift(i);
            let d = expansion_of_one(&shifted, cli.cap);
            json!({
                "shift": i,
                "d_one": d.word,
                "d_one_kind": d.kind,
                "d_star_one": quasi_greedy_one(&shifted, cli.depth),
            })
        })
        .collect()
}

fn cmd_one(cli: &Cli, base: &str) -> Outcome {
    let base = load_base(base)?;
    Ok(json!({ "shifts": ones(cli, &base) }))
}

fn cmd_admissible(cli: &Cli, base: &str, word: &str) -> Outcome {
    let base = load_base(base)?;
    let w = parse_word(word)?;
    Ok(serialize(&is_admissible(&base, &w, cli.depth)))
}

fn cmd_classify(cli: &Cli, base: &str) -> Outcome {
    let base = load_base(base)?;
    let classification = classify_field(base.field())?;
    let positivity = positivity_report(&base)?;
    Ok(json!({
        "base": base.to_config(),
        "period": base.period(),
        "max_digits": base.max_digits(),
        "classification": classification,
        "positivity": positivity,
        "shifts": ones(cli, &base),
    }))
}

fn cmd_certify(cli: &Cli, base: &str, xs: &[String], prefix_blocks: usize) -> Outcome {
    let base = load_base(base)?;
    let rationals = if xs.is_empty() {
        prefix_rationals(&base, prefix_blocks, cli.cap)?
    } else {
        xs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?
    };
    let cert = periodicity_certificate(&base, &rationals, cli.cap)?;
    let identities: Vec<Value> = cert
        .rationals
        .iter()
        .map(|c| match pure_periodic_identity_check(&base, &c.x, &c.expansion) {
            Ok(holds) => json!({ "x": c.x, "applies": true, "holds": holds }),
            Err(_) => json!({ "x": c.x, "applies": false, "holds": null }),
        })
        .collect();
    Ok(json!({ "certificate": cert, "pure_periodic_identity": identities }))
}

fn cmd_value(base: &str, word: &str) -> Outcome {
    let base = load_base(base)?;
    let x = if word.contains('.') {
        pointed_value(&base, &parse_pointed(word)?)?
    } else {
        value_of(&base, &parse_word(word)?)?
    };
    Ok(element_json(&x))
}

fn cmd_convert(base: &str, word: &str) -> Outcome {
    let base = load_base(base)?;
    let w = parse_word(word)?;
    let encoded = block_encode(&base, &w)?;
    let alphabet = base.digit_alphabet();
    let digit = |d: &FieldElement| {
        json!({
            "value": render_element(d),
            "coords": d.coord_strings(),
            "block": alphabet.tuple_of(d),
        })
    };
    let back = block_decode(&base, &encoded)?;
    Ok(json!({
        "word": w,
        "delta_preperiod": encoded.preperiod.iter().map(digit).collect::<Vec<_>>(),
        "delta_period": encoded.period.iter().map(digit).collect::<Vec<_>>(),
        "decoded": back,
        "round_trip": back == w,
    }))
}

fn cmd_pp_rewrite(cli: &Cli, m: u32, x: &str) -> Outcome {
    if m == 0 {
        return Err(Failure::Usage("family parameter must be at least 1".into()));
    }
    let x = parse_rational(x)?;
    Ok(serialize(&pp_rewrite(m, &x, cli.cap, cli.trace)?))
}

fn cmd_gamma_scan(cli: &Cli, base: &str, qmax: u64) -> Outcome {
    let base = load_base(base)?;
    Ok(serialize(&gamma_scan(&base, qmax, cli.cap)))
}

fn cmd_f_check(cli: &Cli, base: &str, samples: usize, seed: u64) -> Outcome {
    let base = load_base(base)?;
    Ok(serialize(&finiteness_sample_check(&base, samples, cli.cap, seed)))
}

fn run(cli: &Cli) -> (&'static str, Value, Outcome) {
    let globals = json!({ "cap": cli.cap, "depth": cli.depth, "trace": cli.trace });
    let with = |extra: Value| {
        let mut inputs = globals.clone();
        inputs.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
        inputs
    };
    match &cli.command {
        Command::Expand { base, x } => ("expand", with(json!({ "base": base, "x": x })), cmd_expand(cli, base, x)),
        Command::One { base } => ("one", with(json!({ "base": base })), cmd_one(cli, base)),
        Command::Admissible { base, word } => {
            ("admissible", with(json!({ "base": base, "word": word })), cmd_admissible(cli, base, word))
        }
        Command::Classify { base } => ("classify", with(json!({ "base": base })), cmd_classify(cli, base)),
        Command::Certify { base, xs, prefix_blocks } => (
            "certify",
            with(json!({ "base": base, "x": xs, "prefix_blocks": prefix_blocks })),
            cmd_certify(cli, base, xs, *prefix_blocks),
        ),
        Command::Value { base, word } => ("value", with(json!({ "base": base, "word": word })), cmd_value(base, word)),
        Command::Convert { base, word } => {
            ("convert", with(json!({ "base": base, "word": word })), cmd_convert(base, word))
        }
        Command::PpRewrite { m, x } => ("pp-rewrite", with(json!({ "m": m, "x": x })), cmd_pp_rewrite(cli, *m, x)),
        Command::GammaScan { base, qmax } => {
            ("gamma-scan", with(json!({ "base": base, "qmax": qmax })), cmd_gamma_scan(cli, base, *qmax))
        }
        Command::FCheck { base, samples, seed } => (
            "f-check",
            with(json!({ "base": base, "samples": samples, "seed": seed })),
            cmd_f_check(cli, base, *samples, *seed),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, inputs, outcome) = run(&cli);
    let (payload, status) = match outcome {
        Ok(payload) => (payload, 0u8),
        Err(Failure::Domain(e)) => (json!({ "error": error_kind(&e), "message": e.to_string() }), 1),
        Err(Failure::Usage(msg)) => (json!({ "error": "MalformedInvocation", "message": msg }), 2),
    };
    let result = json!({ "command": command, "inputs": inputs, "payload": payload, "status": status });
    println!("{}", serde_json::to_string_pretty(&result).expect("json"));
    ExitCode::from(status)
}
