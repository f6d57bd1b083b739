//! Input documents: `cone.json`, `fan.json` and the full analysis request.

use serde_json::{json, Map, Value};
use torifan_core::linalg::{Int, Rat};
use torifan_core::{Cone, Fan, LatticeVector, Side};

use crate::error::{CliError, CliResult};
use crate::json::{parse_int, parse_rat};

pub const DEFAULT_CELL_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub rank: usize,
    pub rays: Vec<LatticeVector>,
}

impl ConeSpec {
    pub fn cone(&self) -> CliResult<Cone> {
        Ok(Cone::from_generators(Side::N, self.rank, &self.rays)?)
    }

    pub fn to_json(&self) -> Value {
        json!({ "rank": self.rank, "rays": self.rays.iter().map(int_array).collect::<Vec<_>>() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanSpec {
    pub rank: usize,
    pub rays: Vec<LatticeVector>,
    pub cones: Vec<Vec<usize>>,
}

impl FanSpec {
    pub fn fan(&self) -> CliResult<Fan> {
        let cones = self
            .cones
            .iter()
            .map(|c| {
                let gens: Vec<LatticeVector> = c.iter().map(|&i| self.rays[i].clone()).collect();
                Cone::from_generators(Side::N, self.rank, &gens)
            })
            .collect::<torifan_core::Result<Vec<_>>>()?;
        Ok(Fan::new(Side::N, self.rank, cones)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "cones": self.cones,
            "rays": self.rays.iter().map(int_array).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Dual,
    Hilbert,
    Divisors,
    RayTest(LatticeVector),
    Arrows(LatticeVector),
    Delta,
    Moderate(FanSpec),
    Crepant(FanSpec),
    Report,
}

impl Command {
    pub fn to_json(&self) -> Value {
        match self {
            Command::Dual => json!("dual"),
            Command::Hilbert => json!("hilbert"),
            Command::Divisors => json!("divisors"),
            Command::Delta => json!("delta"),
            Command::Report => json!("report"),
            Command::RayTest(w) => json!({ "ray-test": int_array(w) }),
            Command::Arrows(w) => json!({ "arrows": int_array(w) }),
            Command::Moderate(f) => json!({ "moderate": f.to_json() }),
            Command::Crepant(f) => json!({ "crepant": f.to_json() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub height_bound: Option<Int>,
    pub norm_bound: Option<Rat>,
    pub cell_budget: usize,
    pub grid_l: Option<u32>,
    pub svg_path: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            height_bound: None,
            norm_bound: None,
            cell_budget: DEFAULT_CELL_BUDGET,
            grid_l: None,
            svg_path: None,
        }
    }
}

impl Options {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        if let Some(h) = &self.height_bound {
            m.insert("height_bound".into(), int_value(h));
        }
        if let Some(b) = &self.norm_bound {
            m.insert("norm_bound".into(), json!(b.to_string()));
        }
        m.insert("cell_budget".into(), json!(self.cell_budget));
        if let Some(l) = self.grid_l {
            m.insert("grid_l".into(), json!(l));
        }
        if let Some(p) = &self.svg_path {
            m.insert("svg_path".into(), json!(p));
        }
        Value::Object(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisRequest {
    pub cone: ConeSpec,
    pub commands: Vec<Command>,
    pub options: Options,
}

impl AnalysisRequest {
    pub fn new(cone: ConeSpec, commands: Vec<Command>) -> Self {
        AnalysisRequest {
            cone,
            commands,
            options: Options::default(),
        }
    }

    /// Canonical form: fixed key order, options at their parsed values.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("rank".into(), json!(self.cone.rank));
        m.insert("rays".into(), json!(self.cone.rays.iter().map(int_array).collect::<Vec<_>>()));
        m.insert("commands".into(), Value::Array(self.commands.iter().map(Command::to_json).collect()));
        m.insert("options".into(), self.options.to_json());
        Value::Object(m)
    }

    pub fn to_canonical_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable") + "\n"
    }
}

fn int_value(x: &Int) -> Value {
    Value::Number(x.to_string().parse().expect("integers are valid JSON numbers"))
}

fn int_array(v: &LatticeVector) -> Value {
    Value::Array(v.coords().iter().map(int_value).collect())
}

fn parse_document(text: &str) -> CliResult<Value> {
    serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

fn object<'a>(v: &'a Value, field: &str) -> CliResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| CliError::input(field, "expected an object"))
}

fn usize_field(v: &Value, field: &str) -> CliResult<usize> {
    let n = v.as_number().ok_or_else(|| CliError::input(field, "expected a nonnegative integer"))?;
    let i = parse_int(n).map_err(|m| CliError::input(field, m))?;
    usize::try_from(i).map_err(|_| CliError::input(field, "expected a nonnegative integer that fits in usize"))
}

fn vector(v: &Value, rank: usize, field: &str) -> CliResult<LatticeVector> {
    let arr = v.as_array().ok_or_else(|| CliError::input(field, "expected an array of integers"))?;
    if arr.len() != rank {
        return Err(CliError::input(field, format!("expected {rank} entries, found {}", arr.len())));
    }
    let coords = arr
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = format!("{field}[{i}]");
            let n = x.as_number().ok_or_else(|| CliError::input(&f, "expected an integer"))?;
            parse_int(n).map_err(|m| CliError::input(&f, m))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(LatticeVector::new(coords))
}

fn rank_of(m: &Map<String, Value>, prefix: &str) -> CliResult<usize> {
    let f = format!("{prefix}rank");
    let rank = usize_field(m.get("rank").ok_or_else(|| CliError::input(&f, "missing"))?, &f)?;
    if rank == 0 {
        return Err(CliError::input(f, "rank must be at least 1"));
    }
    Ok(rank)
}

fn rays_of(m: &Map<String, Value>, rank: usize, prefix: &str) -> CliResult<Vec<LatticeVector>> {
    let f = format!("{prefix}rays");
    let arr = m
        .get("rays")
        .ok_or_else(|| CliError::input(&f, "missing"))?
        .as_array()
        .ok_or_else(|| CliError::input(&f, "expected an array of rays"))?;
    if arr.is_empty() {
        return Err(CliError::input(f, "at least one ray is required"));
    }
    arr.iter()
        .enumerate()
        .map(|(i, r)| {
            let fi = format!("{f}[{i}]");
            let v = vector(r, rank, &fi)?;
            if v.is_zero() {
                return Err(CliError::input(fi, "zero ray"));
            }
            Ok(v)
        })
        .collect()
}

fn cone_from(v: &Value, prefix: &str) -> CliResult<ConeSpec> {
    let m = object(v, if prefix.is_empty() { "document" } else { prefix })?;
    let rank = rank_of(m, prefix)?;
    let rays = rays_of(m, rank, prefix)?;
    Ok(ConeSpec { rank, rays })
}

fn fan_from(v: &Value, prefix: &str) -> CliResult<FanSpec> {
    let m = object(v, if prefix.is_empty() { "document" } else { prefix })?;
    let rank = rank_of(m, prefix)?;
    let rays = rays_of(m, rank, prefix)?;
    let f = format!("{prefix}cones");
    let arr = m
        .get("cones")
        .ok_or_else(|| CliError::input(&f, "missing"))?
        .as_array()
        .ok_or_else(|| CliError::input(&f, "expected an array of ray index lists"))?;
    let mut cones = Vec::with_capacity(arr.len());
    for (i, c) in arr.iter().enumerate() {
        let fi = format!("{f}[{i}]");
        let idx = c.as_array().ok_or_else(|| CliError::input(&fi, "expected an array of ray indices"))?;
        let mut cone = Vec::with_capacity(idx.len());
        for (j, x) in idx.iter().enumerate() {
            let fj = format!("{fi}[{j}]");
            let k = usize_field(x, &fj)?;
            if k >= rays.len() {
                return Err(CliError::input(fj, format!("ray index {k} out of range")));
            }
            cone.push(k);
        }
        cones.push(cone);
    }
    Ok(FanSpec { rank, rays, cones })
}

pub fn parse_cone(text: &str) -> CliResult<ConeSpec> {
    cone_from(&parse_document(text)?, "")
}

pub fn parse_fan(text: &str) -> CliResult<FanSpec> {
    fan_from(&parse_document(text)?, "")
}

fn command_from(v: &Value, rank: usize, field: &str) -> CliResult<Command> {
    if let Some(s) = v.as_str() {
        return match s {
            "dual" => Ok(Command::Dual),
            "hilbert" => Ok(Command::Hilbert),
            "divisors" => Ok(Command::Divisors),
            "delta" => Ok(Command::Delta),
            "report" => Ok(Command::Report),
            other => Err(CliError::input(field, format!("unknown command {other:?}"))),
        };
    }
    let m = object(v, field)?;
    if m.len() != 1 {
        return Err(CliError::input(field, "expected a single-key object"));
    }
    let (k, arg) = m.iter().next().expect("one entry");
    let f = format!("{field}.{k}");
    let check_fan = |spec: FanSpec| {
        if spec.rank != rank {
            return Err(CliError::input(format!("{f}.rank"), format!("fan rank {} differs from cone rank {rank}", spec.rank)));
        }
        Ok(spec)
    };
    match k.as_str() {
        "ray-test" => Ok(Command::RayTest(vector(arg, rank, &f)?)),
        "arrows" => Ok(Command::Arrows(vector(arg, rank, &f)?)),
        "moderate" => Ok(Command::Moderate(check_fan(fan_from(arg, &format!("{f}."))?)?)),
        "crepant" => Ok(Command::Crepant(check_fan(fan_from(arg, &format!("{f}."))?)?)),
        other => Err(CliError::input(field, format!("unknown command {other:?}"))),
    }
}

fn options_from(v: &Value) -> CliResult<Options> {
    let m = object(v, "options")?;
    let mut o = Options::default();
    for (k, x) in m {
        let f = format!("options.{k}");
        match k.as_str() {
            "height_bound" => {
                let n = x.as_number().ok_or_else(|| CliError::input(&f, "expected an integer"))?;
                o.height_bound = Some(parse_int(n).map_err(|e| CliError::input(&f, e))?);
            }
            "norm_bound" => {
                let s = x.as_str().ok_or_else(|| CliError::input(&f, "expected a rational string"))?;
                o.norm_bound = Some(parse_rat(s).map_err(|e| CliError::input(&f, e))?);
            }
            "cell_budget" => o.cell_budget = usize_field(x, &f)?,
            "grid_l" => {
                let l = usize_field(x, &f)?;
                o.grid_l = Some(u32::try_from(l).ok().filter(|&l| l >= 1).ok_or_else(|| CliError::input(&f, "expected 1 ≤ l < 2³²"))?);
            }
            "svg_path" => o.svg_path = Some(x.as_str().ok_or_else(|| CliError::input(&f, "expected a path string"))?.to_string()),
            _ => return Err(CliError::input(f, "unknown option")),
        }
    }
    Ok(o)
}

/// A cone document, optionally carrying `commands` and `options`.
pub fn parse_request(text: &str) -> CliResult<AnalysisRequest> {
    let doc = parse_document(text)?;
    let cone = cone_from(&doc, "")?;
    let m = object(&doc, "document")?;
    for k in m.keys() {
        if !matches!(k.as_str(), "rank" | "rays" | "commands" | "options") {
            return Err(CliError::input(k.as_str(), "unknown field"));
        }
    }
    let commands = match m.get("commands") {
        None => vec![Command::Report],
        Some(c) => c
            .as_array()
            .ok_or_else(|| CliError::input("commands", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, x)| command_from(x, cone.rank, &format!("commands[{i}]")))
            .collect::<CliResult<_>>()?,
    };
    let options = match m.get("options") {
        None => Options::default(),
        Some(o) => options_from(o)?,
    };
    Ok(AnalysisRequest { cone, commands, options })
}

/// `"1,2,2"` from the command line.
pub fn parse_weight(text: &str, rank: usize) -> CliResult<LatticeVector> {
    let coords = text
        .split(',')
        .enumerate()
        .map(|(i, s)| {
            s.trim()
                .parse::<Int>()
                .map_err(|_| CliError::input(format!("w[{i}]"), format!("expected an integer, found {s:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if coords.len() != rank {
        return Err(CliError::input("w", format!("expected {rank} entries, found {}", coords.len())));
    }
    Ok(LatticeVector::new(coords))
}
