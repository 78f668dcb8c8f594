//! JSON formats for lattices, filtrations, instance objects and HN
//! certificates. Rationals are written as `"p/q"` strings and read from
//! strings or JSON numbers.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::gf::Elem;
use crate::algebra::laurent::{LaurentScalar, SeriesRing};
use crate::algebra::laurent_matrix::LMatrix;
use crate::algebra::rational::{format_rational, serde_rational::value_to_rational, Rational};
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::hn::{slope_profile, HnCertificate, Witness};
use crate::instances::bun::OLattice;
use crate::instances::fil::FilteredSpace;
use crate::instances::phi::PhiLattice;
use crate::lattice::{check_rank, height_function, FiniteLattice, LatticeKind};

/// JSON with parse errors reported as line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        // serde_json appends its own " at line L column C"
        let msg = e.to_string();
        let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m).to_string();
        Error::Parse(format!("line {}, column {}: {msg}", e.line(), e.column()))
    })
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn rationals(vs: &[Value]) -> Result<Vec<Rational>> {
    vs.iter().map(value_to_rational).collect()
}

fn rationals_json(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(|r| Value::String(format_rational(r))).collect())
}

/// A lattice together with its rank function and, optionally, a degree.
#[derive(Debug, Clone)]
pub struct LatticeData {
    pub lattice: FiniteLattice,
    pub rank: Vec<Rational>,
    pub deg: Option<Vec<Rational>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    kind: Option<String>,
    q: Option<u32>,
    n: Option<usize>,
    k: Option<usize>,
    r: Option<usize>,
    elements: Option<Vec<String>>,
    leq: Option<Vec<Vec<Value>>>,
    rank: Option<Vec<Value>>,
    deg: Option<Vec<Value>>,
}

/// Parses `"boolean:K"`, `"chain:R"` or `"subspace:Q:N"`.
pub fn lattice_from_spec(spec: &str) -> Result<FiniteLattice> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad number {s:?} in {spec:?}")));
    match parts.as_slice() {
        ["boolean", k] => FiniteLattice::boolean(num(k)?),
        ["chain", r] => FiniteLattice::chain(num(r)?),
        ["subspace", q, n] => FiniteLattice::subspace(num(q)? as u32, num(n)?),
        ["pentagon"] => Ok(FiniteLattice::pentagon()),
        ["diamond"] => Ok(FiniteLattice::diamond()),
        _ => Err(Error::Parse(format!(
            "unknown lattice {spec:?} (boolean:K, chain:R, subspace:Q:N, diamond, pentagon)"
        ))),
    }
}

fn default_rank(l: &FiniteLattice) -> Result<Vec<Rational>> {
    height_function(l)
}

fn leq_entry(v: &Value) -> Result<bool> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::Number(n) if n.as_u64() == Some(0) => Ok(false),
        Value::Number(n) if n.as_u64() == Some(1) => Ok(true),
        other => Err(Error::Parse(format!("leq entries must be booleans or 0/1, got {other}"))),
    }
}

/// Lattice JSON: `{"elements", "leq", "rank"?, "deg"?}` or
/// `{"kind": "subspace", "q", "n", "deg"?}` (also `boolean` with `k`,
/// `chain` with `r`). A missing rank defaults to the height function.
pub fn parse_lattice(text: &str) -> Result<LatticeData> {
    let raw: RawLattice = from_value(parse_json(text)?, "lattice")?;
    let need = |x: Option<usize>, name: &str| x.ok_or_else(|| Error::Parse(format!("missing {name:?}")));
    let lattice = match raw.kind.as_deref() {
        Some("subspace") => FiniteLattice::subspace(
            raw.q.ok_or_else(|| Error::Parse("missing \"q\"".into()))?,
            need(raw.n, "n")?,
        )?,
        Some("boolean") => FiniteLattice::boolean(need(raw.k, "k")?)?,
        Some("chain") => FiniteLattice::chain(need(raw.r, "r")?)?,
        Some(other) => return Err(Error::Parse(format!("unknown lattice kind {other:?}"))),
        None => {
            let labels = raw.elements.ok_or_else(|| Error::Parse("missing \"elements\"".into()))?;
            let leq = raw.leq.ok_or_else(|| Error::Parse("missing \"leq\"".into()))?;
            let leq: Vec<Vec<bool>> = leq
                .iter()
                .map(|row| row.iter().map(leq_entry).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            FiniteLattice::from_leq(labels, &leq)?
        }
    };
    lattice.ensure_modular()?;
    let rank = match raw.rank {
        Some(r) => {
            let r = rationals(&r)?;
            if let Some(v) = check_rank(&lattice, &r) {
                return Err(Error::RankAxiomViolation(format!(
                    "{:?} at ({}, {})",
                    v.axiom,
                    lattice.label(v.a),
                    lattice.label(v.b)
                )));
            }
            r
        }
        None => default_rank(&lattice)?,
    };
    let deg = raw.deg.map(|d| rationals(&d)).transpose()?;
    if let Some(d) = &deg {
        if d.len() != lattice.len() {
            return Err(Error::Parse(format!("deg has {} entries, expected {}", d.len(), lattice.len())));
        }
    }
    Ok(LatticeData { lattice, rank, deg })
}

pub fn lattice_to_json(l: &FiniteLattice, rank: &[Rational], deg: Option<&[Rational]>) -> Value {
    let n = l.len();
    let leq: Vec<Vec<u8>> = (0..n).map(|a| (0..n).map(|b| l.leq(a, b) as u8).collect()).collect();
    let mut v = json!({ "elements": l.labels(), "leq": leq, "rank": rationals_json(rank) });
    if let Some(d) = deg {
        v["deg"] = rationals_json(d);
    }
    v
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiltration {
    chain: Vec<String>,
    jumps: Vec<Value>,
}

/// Filtration JSON: `{"chain": [labels], "jumps": [...]}`, jumps strictly
/// decreasing; the bottom element may be left out of the chain.
pub fn parse_filtration(l: &FiniteLattice, text: &str) -> Result<Filtration> {
    filtration_from_value(l, parse_json(text)?)
}

pub fn filtration_from_value(l: &FiniteLattice, v: Value) -> Result<Filtration> {
    let raw: RawFiltration = from_value(v, "filtration")?;
    let chain = raw
        .chain
        .iter()
        .map(|s| l.find(s).ok_or_else(|| Error::Parse(format!("unknown element {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Filtration::new(l, chain, rationals(&raw.jumps)?)
}

pub fn filtration_to_json(l: &FiniteLattice, f: &Filtration) -> Value {
    let chain: Vec<&str> = f.chain().iter().map(|&x| l.label(x)).collect();
    json!({ "chain": chain, "jumps": rationals_json(f.jumps()) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    jump: Value,
    basis: Vec<Vec<Elem>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    q: u32,
    m: u32,
    n: usize,
    flag: Vec<RawStep>,
}

/// FilteredSpace JSON: `{"q", "m", "n", "flag": [{"jump", "basis"}]}` with
/// basis rows of integer codes in `F_{q^m}`.
pub fn parse_filtered_space(text: &str) -> Result<FilteredSpace> {
    filtered_space_from_value(parse_json(text)?)
}

fn filtered_space_from_value(v: Value) -> Result<FilteredSpace> {
    let raw: RawSpace = from_value(v, "filtered space")?;
    let steps = raw
        .flag
        .into_iter()
        .map(|s| Ok((value_to_rational(&s.jump)?, s.basis)))
        .collect::<Result<Vec<_>>>()?;
    FilteredSpace::new(raw.q, raw.m, raw.n, steps)
}

pub fn filtered_space_to_json(x: &FilteredSpace) -> Value {
    let flag: Vec<Value> = x
        .flag()
        .iter()
        .map(|s| json!({ "jump": format_rational(&s.jump), "basis": s.basis }))
        .collect();
    json!({ "q": x.q(), "m": x.m(), "n": x.n(), "flag": flag })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOLattice {
    q: u32,
    n: usize,
    basis: Vec<Vec<String>>,
    phi: Option<String>,
}

/// An O-lattice, or a split φ-lattice when the file says `"phi": "split"`.
#[derive(Debug, Clone)]
pub enum LaurentObject {
    Bun(OLattice),
    Phi(PhiLattice),
}

/// OLattice JSON: `{"q", "n", "basis": [[scalar strings]]}`, the basis
/// matrix by rows; its columns span the lattice.
pub fn parse_o_lattice(text: &str, precision: usize) -> Result<LaurentObject> {
    o_lattice_from_value(parse_json(text)?, precision)
}

fn o_lattice_from_value(v: Value, precision: usize) -> Result<LaurentObject> {
    let raw: RawOLattice = from_value(v, "O-lattice")?;
    let ring = SeriesRing::with_order(raw.q, precision)?;
    if raw.basis.len() != raw.n || raw.basis.iter().any(|r| r.len() != raw.n) {
        return Err(Error::DimensionMismatch(format!("basis must be {0}x{0}", raw.n)));
    }
    let rows = raw
        .basis
        .iter()
        .map(|r| r.iter().map(|s| ring.parse(s)).collect::<Result<Vec<LaurentScalar>>>())
        .collect::<Result<Vec<_>>>()?;
    let l = OLattice::load(ring, LMatrix::from_rows(rows)?)?;
    match raw.phi.as_deref() {
        None => Ok(LaurentObject::Bun(l)),
        Some("split") => Ok(LaurentObject::Phi(PhiLattice::new(l))),
        Some(other) => Err(Error::Parse(format!("unsupported Frobenius {other:?}; only \"split\""))),
    }
}

pub fn o_lattice_to_json(l: &OLattice, phi: bool) -> Value {
    let b = l.basis();
    let rows: Vec<Vec<String>> = (0..b.rows()).map(|i| b.row(i).iter().map(|x| x.to_string()).collect()).collect();
    let mut v = json!({ "q": l.q(), "n": l.n(), "basis": rows });
    if phi {
        v["phi"] = json!("split");
    }
    v
}

/// Any instance object, told apart by its fields.
#[derive(Debug, Clone)]
pub enum InstanceObject {
    Fil(FilteredSpace),
    Bun(OLattice),
    Phi(PhiLattice),
}

pub fn parse_instance(text: &str, precision: usize) -> Result<InstanceObject> {
    let v = parse_json(text)?;
    if v.get("flag").is_some() {
        return Ok(InstanceObject::Fil(filtered_space_from_value(v)?));
    }
    Ok(match o_lattice_from_value(v, precision)? {
        LaurentObject::Bun(l) => InstanceObject::Bun(l),
        LaurentObject::Phi(l) => InstanceObject::Phi(l),
    })
}

pub fn instance_to_json(x: &InstanceObject) -> Value {
    match x {
        InstanceObject::Fil(s) => filtered_space_to_json(s),
        InstanceObject::Bun(l) => o_lattice_to_json(l, false),
        InstanceObject::Phi(l) => o_lattice_to_json(&l.lattice, true),
    }
}

fn witness_json(l: &FiniteLattice, w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(Witness::Destabilizer { element, slope }) => json!({
            "destabilizer": l.label(*element),
            "slope": format_rational(slope),
        }),
        Some(Witness::SlopeMismatch { actual }) => json!({ "actual_slope": format_rational(actual) }),
    }
}

/// Certificate JSON with exact rationals and element labels.
pub fn certificate_to_json(l: &FiniteLattice, c: &HnCertificate) -> Value {
    let gr: Vec<Value> = c
        .gr_report
        .iter()
        .map(|e| {
            json!({
                "lower": l.label(e.lower),
                "upper": l.label(e.upper),
                "jump": format_rational(&e.jump),
                "semistable": e.result.ok,
                "witness": witness_json(l, &e.result.witness),
            })
        })
        .collect();
    let failure = c.first_failure().map(|s| {
        json!({
            "filtration": filtration_to_json(l, &s.f),
            "degree": format_rational(&s.degree),
            "pairing": format_rational(&s.pairing),
            "objective": format_rational(&s.objective),
        })
    });
    let exact = c.exact_variant.as_ref().map(|e| {
        json!({
            "opposed": filtration_to_json(l, &e.opposed),
            "degree_sum_zero": e.degree_sum_zero,
            "pairing_is_minus_norm": e.pairing_is_minus_norm,
            "opposed_dominated": e.opposed_dominated,
            "recovers_optimum": e.recovers_optimum,
        })
    });
    json!({
        "hn": filtration_to_json(l, &c.hn),
        "objective": format_rational(&c.objective),
        "norm2": format_rational(&c.norm2),
        "degree": format_rational(&c.degree),
        "optimum_identity": c.optimum_identity(),
        "graded_pieces": gr,
        "dominance": {
            "samples": c.samples.len(),
            "seed": c.seed,
            "ok": c.dominance_ok(),
            "first_failure": failure,
        },
        "exact_variant": exact,
        "valid": c.valid(),
    })
}

/// Slope polygon as CSV rows `rank,degree`, cumulative along the HN chain.
pub fn slope_polygon_csv(rank: &[Rational], deg: &[Rational], f: &Filtration) -> String {
    let mut out = String::from("rank,degree\n");
    for (r, d) in slope_profile(rank, deg, f) {
        out.push_str(&format!("{},{}\n", format_rational(&r), format_rational(&d)));
    }
    out
}

/// Short name of a lattice kind, for reports.
pub fn kind_name(l: &FiniteLattice) -> String {
    match l.kind() {
        LatticeKind::Boolean(k) => format!("boolean({k})"),
        LatticeKind::Chain(r) => format!("chain({r})"),
        LatticeKind::Subspace { q, n } => format!("subspace({q},{n})"),
        LatticeKind::Product => "product".into(),
        LatticeKind::Interval => "interval".into(),
        LatticeKind::Sublattice => "sublattice".into(),
        LatticeKind::Graded => "graded".into(),
        LatticeKind::Explicit => "explicit".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::hn::hn_greedy;

    #[test]
    fn explicit_lattice_round_trip() {
        let l = FiniteLattice::boolean(2).unwrap();
        let rank = height_function(&l).unwrap();
        let deg = vec![int(0), int(1), int(0), int(1)];
        let text = lattice_to_json(&l, &rank, Some(&deg)).to_string();
        let back = parse_lattice(&text).unwrap();
        assert_eq!(back.lattice.labels(), l.labels());
        assert_eq!(back.rank, rank);
        assert_eq!(back.deg.unwrap(), deg);
    }

    #[test]
    fn subspace_kind_and_filtration() {
        let d = parse_lattice(r#"{"kind":"subspace","q":2,"n":2,"deg":[0,1,0,0,1]}"#).unwrap();
        let l = &d.lattice;
        assert_eq!(l.len(), 5);
        let f = hn_greedy(l, &d.rank, d.deg.as_ref().unwrap()).unwrap();
        let v = filtration_to_json(l, &f);
        assert_eq!(v, json!({"chain": ["<>", "<10>", "<10,01>"], "jumps": ["1", "0"]}));
        assert_eq!(filtration_from_value(l, v).unwrap(), f);
        let short = parse_filtration(l, r#"{"chain":["<10>","1"],"jumps":["1",0]}"#).unwrap();
        assert_eq!(short, f);
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_lattice("{\n  \"kind\": \"subspace\",\n  \"q\": }").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        assert!(parse_lattice(r#"{"kind":"torus"}"#).is_err());
        assert!(matches!(
            parse_lattice(r#"{"elements":["0","a","b","1"],"leq":[[1,1,1,1],[0,1,0,1],[0,0,1,1],[0,0,0,1]],"rank":[0,1,1,3]}"#),
            Err(Error::RankAxiomViolation(_))
        ));
    }

    #[test]
    fn instances_round_trip() {
        let fil = r#"{"q":2,"m":2,"n":2,"flag":[{"jump":"1","basis":[[1,2]]},{"jump":"0","basis":[[1,0],[0,1]]}]}"#;
        let x = parse_instance(fil, 64).unwrap();
        let back = parse_instance(&instance_to_json(&x).to_string(), 64).unwrap();
        match (x, back) {
            (InstanceObject::Fil(a), InstanceObject::Fil(b)) => assert_eq!(a, b),
            _ => panic!("expected filtered spaces"),
        }
        let bun = r#"{"q":2,"n":2,"basis":[["t^0*(1)","t^1*(1)"],["0","t^-1*(1+t)"]],"phi":"split"}"#;
        let InstanceObject::Phi(p) = parse_instance(bun, 64).unwrap() else { panic!("expected a φ-lattice") };
        let again = parse_instance(&o_lattice_to_json(&p.lattice, true).to_string(), 64).unwrap();
        let InstanceObject::Phi(p2) = again else { panic!("expected a φ-lattice") };
        assert!(p.lattice.same_lattice(&p2.lattice).unwrap());
    }

    #[test]
    fn lattice_specs() {
        assert_eq!(lattice_from_spec("boolean:3").unwrap().len(), 8);
        assert_eq!(lattice_from_spec("chain:3").unwrap().len(), 4);
        assert_eq!(lattice_from_spec("subspace:2:2").unwrap().len(), 5);
        assert!(lattice_from_spec("cube").is_err());
    }
}
