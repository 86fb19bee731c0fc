use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use divcyl_core::analysis::{self, divisibility_exponent, is_divisible, is_spanning};
use divcyl_core::canon::canonical_form;
use divcyl_core::classify::{enumerate_divisible_sets, ClassificationTask};
use divcyl_core::code::{code_from_points, is_projective, points_from_code, residual_code, weight_distribution, GeneratorMatrix};
use divcyl_core::cylinder::{
    construct_cylinder, lift, recognize_cylinder, recognize_cylinder_exhaustive, subfield_embed, CylinderWitness,
};
use divcyl_core::gf::prime_power;
use divcyl_core::io::{format_matrix, format_point_set, parse_matrix, parse_point_set};
use divcyl_core::solver::{
    bound_spectrum_value, divisible_system, enumerate_integer_spectra, parametric_solve, parse_constraints,
    plane_line_system, standard_system, Direction, ExactSystem,
};
use divcyl_core::{Field, PointMultiset};

use crate::{CodeCmd, CylinderCmd, EnumerateArgs, Format, SolveCmd, SolveOpts};

pub struct Ctx {
    pub format: Format,
    pub modulus: Option<String>,
}

impl Ctx {
    pub fn json(&self) -> bool {
        self.format == Format::Json
    }

    pub fn field(&self, q: u64) -> Result<Field> {
        let Some(m) = &self.modulus else {
            return Ok(Field::with_order(q)?);
        };
        let coeffs = m
            .split(',')
            .map(|c| c.trim().parse::<u8>())
            .collect::<std::result::Result<Vec<u8>, _>>()
            .map_err(|_| anyhow!("cannot parse modulus '{m}'"))?;
        let (p, h) = prime_power(q).ok_or_else(|| anyhow!("{q} is not a prime power"))?;
        Ok(Field::new(p, h, Some(&coeffs))?)
    }

    fn emit(&self, text: &str, value: Value) {
        if self.json() {
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        } else {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
}

/// Input file contents: either a point set or a generator matrix.
pub enum Input {
    Points(PointMultiset),
    Matrix(GeneratorMatrix),
}

fn header_q(text: &str) -> Result<(u64, bool)> {
    let head = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| anyhow!("empty input"))?;
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.len() < 2 || toks[0] != "q" {
        bail!("line 1: expected a header starting with `q <q>`");
    }
    let q = toks[1].parse().map_err(|_| anyhow!("line 1: bad value for q: `{}`", toks[1]))?;
    Ok((q, toks.get(2) == Some(&"k")))
}

pub fn load(ctx: &Ctx, path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let (q, matrix) = header_q(&text).with_context(|| path.display().to_string())?;
    let f = ctx.field(q)?;
    let parsed = if matrix {
        parse_matrix(&text, Some(&f)).map(Input::Matrix)
    } else {
        parse_point_set(&text, Some(&f)).map(Input::Points)
    };
    parsed.with_context(|| path.display().to_string())
}

pub fn load_points(ctx: &Ctx, path: &Path) -> Result<PointMultiset> {
    match load(ctx, path)? {
        Input::Points(m) => Ok(m),
        Input::Matrix(g) => Ok(points_from_code(&g)?.0),
    }
}

pub fn load_matrix(ctx: &Ctx, path: &Path) -> Result<GeneratorMatrix> {
    match load(ctx, path)? {
        Input::Matrix(g) => Ok(g),
        Input::Points(m) => Ok(code_from_points(&m)?.matrix),
    }
}

/// A vector as a digit string for q <= 10, else as a list of codes.
fn vec_json(x: &[u8], q: usize) -> Value {
    if q <= 10 {
        Value::String(x.iter().map(|&e| char::from(b'0' + e)).collect())
    } else {
        json!(x)
    }
}

fn points_json(m: &PointMultiset) -> Value {
    let pts: Vec<Value> = m
        .iter()
        .map(|(id, c)| {
            json!({"point": vec_json(m.space().point(id), m.q()), "mult": c})
        })
        .collect();
    json!({"q": m.q(), "v": m.v(), "n": m.n(), "points": pts})
}

fn rows_json(g: &GeneratorMatrix) -> Value {
    let rows: Vec<Value> = g.rows().iter().map(|r| vec_json(r, g.field().q())).collect();
    json!({"q": g.field().q(), "k": g.k(), "n": g.n(), "rows": rows})
}

pub fn spectrum(ctx: &Ctx, path: &Path, codim: usize) -> Result<u8> {
    let m = load_points(ctx, path)?;
    let s = analysis::spectrum(&m, codim)?;
    let mut text = format!("n {} v {} q {} codim {}\n", s.n, s.v, s.q, s.codim);
    for (i, a) in &s.a {
        text += &format!("a{i} = {a}\n");
    }
    ctx.emit(&text, serde_json::to_value(&s)?);
    Ok(0)
}

pub fn divisible(ctx: &Ctx, path: &Path, delta: u64) -> Result<u8> {
    let m = load_points(ctx, path)?;
    let d = is_divisible(&m, delta)?;
    let exp = divisibility_exponent(&m)?;
    let witness = d.witness.map(|h| vec_json(m.space().point(h), m.q()));
    let mut text = format!("{}-divisible: {}\n", delta, if d.divisible { "yes" } else { "no" });
    if let Some(w) = &witness {
        text += &format!("violating hyperplane normal: {}\n", w.to_string().replace('"', ""));
    }
    text += &format!("largest r with q^r-divisibility: {exp}\n");
    ctx.emit(
        &text,
        json!({"delta": delta, "divisible": d.divisible, "witness": witness, "exponent": exp}),
    );
    Ok(0)
}

fn witness_json(m: &PointMultiset, w: &CylinderWitness) -> Value {
    let s = m.space();
    let axis: Vec<Value> = w.axis.points(s).iter().map(|&p| vec_json(s.point(p), m.q())).collect();
    let reps: Vec<Value> = w.reps.iter().map(|&p| vec_json(s.point(p), m.q())).collect();
    json!({"axis_points": axis, "representatives": reps})
}

pub fn cylinder(ctx: &Ctx, c: CylinderCmd) -> Result<u8> {
    match c {
        CylinderCmd::Check { input, r, exhaustive } => {
            let m = load_points(ctx, &input)?;
            let w = if exhaustive {
                recognize_cylinder_exhaustive(&m, r)?
            } else {
                recognize_cylinder(&m, r)?
            };
            match w {
                Some(w) => {
                    let j = witness_json(&m, &w);
                    let show = |k: &str| j[k].as_array().unwrap().iter().map(|x| x.to_string().replace('"', "")).collect::<Vec<_>>().join(" ");
                    let text = format!("cylinder with axis {}\nrepresentatives {}\n", show("axis_points"), show("representatives"));
                    ctx.emit(&text, json!({"cylinder": true, "witness": j}));
                }
                None => ctx.emit("not a cylinder\n", json!({"cylinder": false})),
            }
        }
        CylinderCmd::Make { input, r } => {
            let m = load_points(ctx, &input)?;
            let (out, _) = construct_cylinder(&m, r)?;
            ctx.emit(&format_point_set(&out), points_json(&out));
        }
        CylinderCmd::Lift { input } => {
            let out = lift(&load_points(ctx, &input)?)?;
            ctx.emit(&format_point_set(&out), points_json(&out));
        }
        CylinderCmd::Embed { input, h } => {
            let m = load_points(ctx, &input)?;
            let out = subfield_embed(&m, h)?;
            let text = if out.q() <= 10 {
                format_point_set(&out)
            } else {
                serde_json::to_string(&points_json(&out))? + "\n"
            };
            ctx.emit(&text, points_json(&out));
        }
    }
    Ok(0)
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| anyhow!("bad list entry '{t}'")))
        .collect()
}

fn run_system(ctx: &Ctx, sys: ExactSystem, opts: &SolveOpts) -> Result<u8> {
    let allowed = opts.allowed.as_deref().map(parse_list).transpose()?;
    let extra = match &opts.fix {
        Some(f) => parse_constraints(f)?,
        None => Vec::new(),
    };
    let sys = match &allowed {
        Some(a) => sys.restrict(a),
        None => sys,
    };
    if let Some(b) = &opts.bound {
        let (var, dir) = b
            .split_once(':')
            .ok_or_else(|| anyhow!("--bound expects a<i>:min|max"))?;
        let i: u64 = var
            .strip_prefix('a')
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| anyhow!("bad variable '{var}'"))?;
        let dir: Direction = dir.parse()?;
        let val = bound_spectrum_value(&sys, i, dir)?;
        ctx.emit(&format!("{b} = {val}\n"), json!({"bound": b, "value": val.to_string()}));
        return Ok(0);
    }
    if let Some(free) = &opts.free {
        let free = parse_list(free)?;
        let forms = parametric_solve(&sys, &free)?;
        let lines: Vec<String> = forms.iter().map(|f| f.to_string()).collect();
        ctx.emit(&(lines.join("\n") + "\n"), json!({"forms": lines}));
        return Ok(0);
    }
    let sols = enumerate_integer_spectra(&sys, None, &extra)?;
    let vars = sys.vars.clone();
    let rows: Vec<Vec<i64>> = sols.iter().map(|s| s.values(&vars)).collect();
    let mut text = format!("{} solution(s) over {}\n", rows.len(), vars.iter().map(|v| format!("a{v}")).collect::<Vec<_>>().join(" "));
    for r in &rows {
        text += &format!("({})\n", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    }
    ctx.emit(&text, json!({"vars": vars, "solutions": rows}));
    Ok(0)
}

pub fn solve(ctx: &Ctx, s: SolveCmd) -> Result<u8> {
    match s {
        SolveCmd::Standard { q, v, n, spanning, opts } => run_system(ctx, standard_system(n, v, q, spanning)?, &opts),
        SolveCmd::Divisible { q, v, r, opts } => run_system(ctx, divisible_system(v, r, q)?, &opts),
        SolveCmd::Plane { q, n, opts } => {
            let allowed = opts
                .allowed
                .as_deref()
                .map(parse_list)
                .transpose()?
                .unwrap_or_else(|| (0..=q + 1).collect());
            let o = SolveOpts {
                allowed: None,
                ..opts
            };
            run_system(ctx, plane_line_system(q, n, &allowed)?, &o)
        }
    }
}

fn parse_digits(s: &str, f: &Field) -> Result<Vec<u8>> {
    s.bytes()
        .map(|b| match b {
            b'0'..=b'9' if ((b - b'0') as usize) < f.q() => Ok(b - b'0'),
            _ => Err(anyhow!("bad symbol '{}' for q = {}", b as char, f.q())),
        })
        .collect()
}

pub fn code(ctx: &Ctx, c: CodeCmd) -> Result<u8> {
    match c {
        CodeCmd::Weights { input } => {
            let g = load_matrix(ctx, &input)?;
            let w = weight_distribution(&g)?;
            let text = format!("{w}\nprojective: {}\n", is_projective(&g));
            ctx.emit(
                &text,
                json!({"weights": w.counts.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect::<BTreeMap<_, _>>(),
                       "enumerator": w.to_string(), "projective": is_projective(&g)}),
            );
        }
        CodeCmd::Residual { input, codeword, message } => {
            let g = load_matrix(ctx, &input)?;
            let word = match (codeword, message) {
                (Some(c), _) => parse_digits(&c, g.field())?,
                (None, Some(m)) => {
                    let m = parse_digits(&m, g.field())?;
                    if m.len() != g.k() {
                        bail!("message needs {} symbols", g.k());
                    }
                    g.encode(&m)
                }
                (None, None) => bail!("pass --codeword or --message"),
            };
            if word.len() != g.n() {
                bail!("codeword needs {} symbols", g.n());
            }
            let r = residual_code(&g, &word)?;
            ctx.emit(&format_matrix(&r), rows_json(&r));
        }
        CodeCmd::Canon { input, stretch } => {
            let g = load_matrix(ctx, &input)?;
            let (m, zeros) = points_from_code(&g)?;
            let cf = canonical_form(&m, stretch)?;
            let cm = code_from_points(&cf.image)?.matrix;
            let text = format!(
                "{}aut order {}\nspanning {}\nzero columns {}\n",
                format_matrix(&cm),
                cf.aut_order(),
                is_spanning(&m),
                zeros
            );
            ctx.emit(
                &text,
                json!({"matrix": rows_json(&cm), "aut_order": cf.aut_order().to_string(),
                       "key": cf.key, "zero_columns": zeros}),
            );
        }
    }
    Ok(0)
}

pub fn enumerate(ctx: &Ctx, a: EnumerateArgs) -> Result<u8> {
    let mut t = ClassificationTask::projective(a.q, a.n, a.r);
    if let Some(m) = a.max_mult {
        t.projective = a.projective || m <= 1;
        t.max_mult = m;
    }
    t.stretch = a.stretch;
    if a.stretch && a.v_max.is_none() {
        let ward = a.r.map_or(a.n as usize, |r| a.q as usize * (r as usize + 1));
        t.v_max = ward.min(a.n as usize);
    }
    if let Some(v) = a.v_min {
        t.v_min = v;
    }
    if let Some(v) = a.v_max {
        t.v_max = v;
    }
    t.allowed = a.allowed.as_deref().map(parse_list).transpose()?;
    if ctx.modulus.is_some() {
        bail!("enumerate uses the default modulus; classes do not depend on it");
    }
    let cl = enumerate_divisible_sets(&t)?;
    let mut text = format!("q {} n {} dims {}..{}\n", t.q, t.n, t.v_min, t.v_max);
    let mut groups = BTreeMap::new();
    for g in &cl.groups {
        text += &format!("dim {}: {} class(es)\n", g.dim, g.classes.len());
        let classes: Vec<Value> = g
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                json!({"id": format!("d{}_{}", g.dim, i), "aut_order": c.aut_order.map(|x| x.to_string()),
                       "key": c.key, "divisibility_exponent": divisibility_exponent(&c.canonical).ok()})
            })
            .collect();
        groups.insert(g.dim.to_string(), classes);
    }
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for g in &cl.groups {
            for (i, c) in g.classes.iter().enumerate() {
                let path = dir.join(format!("d{}_{}.mat", g.dim, i));
                fs::write(&path, format_matrix(&code_from_points(&c.canonical)?.matrix))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
        }
        let index = json!({"task": {"q": t.q, "n": t.n, "r": t.r, "v_min": t.v_min, "v_max": t.v_max}, "classes": groups});
        fs::write(dir.join("index.json"), serde_json::to_string_pretty(&index)? + "\n")?;
    }
    ctx.emit(&text, json!({"counts": cl.counts(), "classes": groups}));
    Ok(0)
}

