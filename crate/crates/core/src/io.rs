//! JSON ingestion and emission for every file the command-line tool reads
//! or writes. Emitted documents carry `"schema": "twisted-schur/1"`;
//! parsers accept documents with or without it.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use crate::budget::Budget;
use crate::cohomology::{CocycleTable, CohomologyGroup, UnitCocycle};
use crate::cyclotomic::{ComplexLattice, CyclotomicField, CyclotomicNumber, SemilinearMatrix};
use crate::error::{Error, Result};
use crate::extensions::{ExtensionData, ExtensionDump};
use crate::gmodule::{SignCharacter, TwistedModule};
use crate::group::{standard_group, FiniteGroup, StandardFamily};
use crate::repgroups::SearchResult;
use crate::semiprojective::{MonomialMap, SemiProjectiveRep};

pub const SCHEMA: &str = "twisted-schur/1";

fn parse_value(text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::input(format!("malformed JSON: {e}")))?;
    if let Some(s) = v.get("schema") {
        if s != SCHEMA {
            return Err(Error::input(format!("unsupported schema {s}, expected \"{SCHEMA}\"")));
        }
    }
    Ok(v)
}

fn field<T: DeserializeOwned>(v: &Value, key: &str) -> Result<T> {
    let x = v.get(key).ok_or_else(|| Error::input(format!("missing field \"{key}\"")))?;
    serde_json::from_value(x.clone()).map_err(|e| Error::input(format!("field \"{key}\": {e}")))
}

fn opt_field<T: DeserializeOwned>(v: &Value, key: &str) -> Result<Option<T>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => field(v, key).map(Some),
    }
}

fn tagged(mut body: Map<String, Value>) -> Value {
    body.insert("schema".into(), json!(SCHEMA));
    Value::Object(body)
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("emitters build objects"),
    }
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- groups

/// Reads a group file: `{"permutations": ...}`, `{"cayley": ...}` or
/// `{"family": ..., "params": ...}`.
///
/// Permutations are 0-based image lists; lists that never mention 0 and
/// use exactly `1..=n` are read as 1-based. The group's generators are the
/// listed permutations, in order.
pub fn parse_group(text: &str, budget: &Budget) -> Result<FiniteGroup> {
    let v = parse_value(text)?;
    let name: Option<String> = opt_field(&v, "name")?;
    let g = if v.get("permutations").is_some() {
        let mut perms: Vec<Vec<usize>> = field(&v, "permutations")?;
        let points = perms.first().map_or(0, Vec::len);
        if points == 0 {
            return Err(Error::input("\"permutations\" must list at least one non-empty permutation"));
        }
        let one_based = perms.iter().flatten().all(|&x| x >= 1 && x <= points);
        if one_based {
            for x in perms.iter_mut().flatten() {
                *x -= 1;
            }
        }
        FiniteGroup::from_permutations(points, &perms, budget)?
    } else if v.get("cayley").is_some() {
        let table: Vec<Vec<usize>> = field(&v, "cayley")?;
        if table.len() > budget.max_group_order {
            return Err(Error::resource("group order", table.len() as u64, budget.max_group_order as u64));
        }
        let gens: Option<Vec<usize>> = opt_field(&v, "generators")?;
        FiniteGroup::from_cayley(&table, gens, "G")?
    } else if v.get("family").is_some() {
        let fam: StandardFamily =
            serde_json::from_value(v.clone()).map_err(|e| Error::input(format!("group family: {e}")))?;
        standard_group(&fam, budget)?
    } else {
        return Err(Error::input("group file needs \"permutations\", \"cayley\" or \"family\""));
    };
    Ok(match name {
        Some(n) => g.with_name(n),
        None => g,
    })
}

/// Emits a group as a Cayley table with its generators.
pub fn group_json(g: &FiniteGroup) -> Value {
    tagged(object(json!({
        "name": g.name(),
        "cayley": g.cayley_table(),
        "generators": g.generators(),
    })))
}

/// Parses `"1,-1,1"` into a sign character on the group's generators.
pub fn parse_action(g: &FiniteGroup, text: &str) -> Result<SignCharacter> {
    let signs = if text.trim().is_empty() {
        Vec::new()
    } else {
        text.split(',')
            .map(|s| {
                let s = s.trim();
                s.strip_prefix('+')
                    .unwrap_or(s)
                    .parse::<i64>()
                    .map_err(|_| Error::input(format!("action entry \"{s}\" is not ±1")))
            })
            .collect::<Result<Vec<_>>>()?
    };
    SignCharacter::from_generators(g, &signs)
}

// ---------------------------------------------------------------- modules

/// Reads `{"free_rank": r, "moduli": [...], "action": {"<gen index>": matrix}}`
/// (unlisted generators act trivially) or the shorthand `{"sign": [±1, ...]}`.
pub fn parse_module(g: &FiniteGroup, text: &str) -> Result<TwistedModule> {
    let v = parse_value(text)?;
    if v.get("sign").is_some() {
        let signs: Vec<i64> = field(&v, "sign")?;
        let phi = SignCharacter::from_generators(g, &signs)?;
        return TwistedModule::sign_module(g, &phi);
    }
    let free_rank: usize = opt_field(&v, "free_rank")?.unwrap_or(0);
    let moduli: Vec<u64> = opt_field(&v, "moduli")?.unwrap_or_default();
    let dim = free_rank + moduli.len();
    if dim == 0 {
        return Err(Error::input("module has no coordinates"));
    }
    let action: BTreeMap<String, Vec<Vec<i64>>> = opt_field(&v, "action")?.unwrap_or_default();
    let identity: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
    let mut gens = vec![identity; g.generators().len()];
    for (k, m) in action {
        let i: usize = k.parse().map_err(|_| Error::input(format!("action key \"{k}\" is not a generator index")))?;
        let slot = gens
            .get_mut(i)
            .ok_or_else(|| Error::input(format!("generator index {i} out of range")))?;
        *slot = m;
    }
    TwistedModule::from_generator_action(g, free_rank, &moduli, &gens)
}

/// `"sign"` or `"finite:<json module spec>"` / `"finite:@<path>"` is
/// handled by callers; this accepts the inline form.
pub fn parse_coefficients(g: &FiniteGroup, phi: &SignCharacter, spec: &str) -> Result<TwistedModule> {
    if spec == "sign" {
        return TwistedModule::sign_module(g, phi);
    }
    if spec == "trivial" {
        return TwistedModule::trivial(g, 1, &[]);
    }
    match spec.strip_prefix("finite:") {
        Some(rest) => parse_module(g, rest),
        None => Err(Error::input(format!("unknown coefficient spec \"{spec}\""))),
    }
}

// ---------------------------------------------------------------- cochains

fn tuple_key(t: &[usize]) -> String {
    t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn parse_tuple_key(key: &str, degree: usize, order: usize) -> Result<Vec<usize>> {
    let t: Vec<usize> = if key.is_empty() {
        Vec::new()
    } else {
        key.split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::input(format!("bad cochain key \"{key}\""))))
            .collect::<Result<_>>()?
    };
    if t.len() != degree || t.iter().any(|&x| x >= order) {
        return Err(Error::input(format!("cochain key \"{key}\" does not name a {degree}-tuple of elements")));
    }
    Ok(t)
}

/// Reads `{"degree": n, "modulus": N, "values": {"g,h": e, ...}}`; omitted
/// entries are 0. Entries with an identity argument must be 0.
pub fn parse_cocycle(g: &FiniteGroup, text: &str) -> Result<UnitCocycle> {
    let v = parse_value(text)?;
    let degree: usize = field(&v, "degree")?;
    let modulus: u64 = field(&v, "modulus")?;
    let values: BTreeMap<String, i64> = opt_field(&v, "values")?.unwrap_or_default();
    let mut table = CocycleTable::zero(g.order(), degree, 1);
    for (k, e) in values {
        let t = parse_tuple_key(&k, degree, g.order())?;
        if t.contains(&0) {
            if e.rem_euclid(modulus.max(1) as i64) != 0 {
                return Err(Error::input(format!("cochain is not normalized at \"{k}\"")));
            }
            continue;
        }
        table.set(&t, &[e])?;
    }
    UnitCocycle::new(modulus, table)
}

pub fn cocycle_json(c: &UnitCocycle) -> Value {
    let values: Map<String, Value> = c
        .table()
        .entries()
        .filter(|(_, v)| v[0] != 0)
        .map(|(t, v)| (tuple_key(&t), json!(v[0])))
        .collect();
    tagged(object(json!({ "degree": c.degree(), "modulus": c.modulus(), "values": values })))
}

/// A cochain with values in a module of any dimension.
pub fn cochain_json(c: &CocycleTable) -> Value {
    let values: Map<String, Value> = c
        .entries()
        .filter(|(_, v)| v.iter().any(|&x| x != 0))
        .map(|(t, v)| (tuple_key(&t), if v.len() == 1 { json!(v[0]) } else { json!(v) }))
        .collect();
    json!({ "degree": c.degree(), "values": values })
}

/// `{"invariants": [...], "coordinates": [...]}`.
pub fn class_json(invariants: &[u64], coordinates: &[u64]) -> Value {
    tagged(object(json!({ "invariants": invariants, "coordinates": coordinates })))
}

pub fn cohomology_json(h: &CohomologyGroup, with_reps: bool) -> Value {
    let mut body = object(json!({
        "degree": h.degree(),
        "invariants": h.invariants(),
        "order": h.order().to_string(),
    }));
    if with_reps {
        body.insert("representatives".into(), h.representatives().iter().map(cochain_json).collect());
    }
    tagged(body)
}

// ---------------------------------------------------------------- representations

/// Reads `{"modulus": N, "maps": {"<g>": {"perm": [...], "exps": [...], "conj": bool}}}`.
pub fn parse_rep(g: &FiniteGroup, text: &str) -> Result<SemiProjectiveRep> {
    #[derive(serde::Deserialize)]
    struct Entry {
        perm: Vec<usize>,
        exps: Vec<i64>,
        #[serde(default)]
        conj: bool,
    }
    let v = parse_value(text)?;
    let modulus: u64 = field(&v, "modulus")?;
    let entries: BTreeMap<String, Entry> = field(&v, "maps")?;
    let mut maps: Vec<Option<MonomialMap>> = vec![None; g.order()];
    for (k, e) in entries {
        let i: usize = k.parse().map_err(|_| Error::input(format!("map key \"{k}\" is not an element index")))?;
        let slot = maps.get_mut(i).ok_or_else(|| Error::input(format!("element index {i} out of range")))?;
        *slot = Some(MonomialMap::new(e.perm, e.exps, e.conj, modulus)?);
    }
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| Error::input(format!("no map given for element {i}"))))
        .collect::<Result<Vec<_>>>()?;
    SemiProjectiveRep::new(g, maps)
}

pub fn maps_json(maps: &[MonomialMap]) -> Value {
    let modulus = maps.iter().fold(1u64, |m, f| num_integer::lcm(m, f.modulus));
    let entries: Map<String, Value> = maps
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let f = f.with_modulus(modulus);
            (i.to_string(), json!({ "perm": f.perm, "exps": f.exps, "conj": f.conj }))
        })
        .collect();
    tagged(object(json!({ "modulus": modulus, "maps": entries })))
}

pub fn rep_json(f: &SemiProjectiveRep) -> Value {
    maps_json(f.maps())
}

// ---------------------------------------------------------------- extensions

pub fn extension_json(ext: &ExtensionData) -> Value {
    let mut body = object(serde_json::to_value(ext.dump()).expect("dump serializes"));
    body.insert("gamma_name".into(), json!(ext.gamma().name()));
    tagged(body)
}

pub fn parse_extension(text: &str, budget: &Budget) -> Result<ExtensionData> {
    let v = parse_value(text)?;
    let dump: ExtensionDump = serde_json::from_value(v.clone()).map_err(|e| Error::input(format!("extension dump: {e}")))?;
    let ext = ExtensionData::from_dump(&dump, budget)?;
    let name: Option<String> = opt_field(&v, "gamma_name")?;
    Ok(match name {
        Some(n) => ext.with_gamma_name(n),
        None => ext,
    })
}

pub fn repgroups_json(r: &SearchResult) -> Value {
    let groups: Vec<Value> = r
        .groups
        .iter()
        .map(|g| {
            json!({
                "order": g.group.order(),
                "fingerprint": g.fingerprint,
                "identified_as": g.identified_as,
                "report": g.report,
                "witness": extension_json(&g.witness),
            })
        })
        .collect();
    tagged(object(json!({
        "multiplier": r.multiplier,
        "candidates": r.candidates,
        "accepted": r.accepted,
        "groups": groups,
    })))
}

// ---------------------------------------------------------------- cyclotomic

fn rational_json(q: &BigRational) -> Value {
    if q.is_integer() {
        match i64::try_from(q.to_integer()) {
            Ok(k) => json!(k),
            Err(_) => json!(q.to_string()),
        }
    } else {
        json!(q.to_string())
    }
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|k| BigRational::from_integer(k.into()))
            .ok_or_else(|| Error::input(format!("coefficient {n} is not an integer; write fractions as \"p/q\""))),
        Value::String(s) => s
            .trim()
            .parse::<BigRational>()
            .map_err(|_| Error::input(format!("\"{s}\" is not a rational number"))),
        _ => Err(Error::input(format!("coefficient {v} is neither a number nor a string"))),
    }
}

fn number_json(x: &CyclotomicNumber) -> Value {
    x.coeffs().iter().map(rational_json).collect()
}

fn parse_number(f: &CyclotomicField, v: &Value) -> Result<CyclotomicNumber> {
    let Value::Array(cs) = v else {
        return Err(Error::input("a field element is a list of coefficients of 1, ζ, ζ², …"));
    };
    let cs = cs.iter().map(parse_rational).collect::<Result<Vec<_>>>()?;
    Ok(f.from_coeffs(&cs))
}

fn parse_vectors(f: &CyclotomicField, v: &Value, key: &str) -> Result<Vec<Vec<CyclotomicNumber>>> {
    let rows: Vec<Vec<Value>> = field(v, key)?;
    rows.iter().map(|r| r.iter().map(|x| parse_number(f, x)).collect()).collect()
}

/// `{"conductor": n, "conj": bool, "rows": [[coeffs, ...], ...]}`.
pub fn parse_matrix(text: &str) -> Result<(CyclotomicField, SemilinearMatrix)> {
    let v = parse_value(text)?;
    let f = CyclotomicField::new(field(&v, "conductor")?)?;
    let conj: bool = opt_field(&v, "conj")?.unwrap_or(false);
    let rows = parse_vectors(&f, &v, "rows")?;
    let m = SemilinearMatrix::new(&f, rows, conj)?;
    Ok((f, m))
}

pub fn matrix_json(f: &CyclotomicField, m: &SemilinearMatrix) -> Value {
    let rows: Vec<Vec<Value>> = m.rows().iter().map(|r| r.iter().map(number_json).collect()).collect();
    tagged(object(json!({ "conductor": f.conductor(), "conj": m.is_conj(), "rows": rows })))
}

/// `{"conductor": n, "basis": [...]}` or `{"conductor": n, "generators": [...]}`.
pub fn parse_lattice(text: &str) -> Result<(CyclotomicField, ComplexLattice)> {
    let v = parse_value(text)?;
    let f = CyclotomicField::new(field(&v, "conductor")?)?;
    let l = if v.get("basis").is_some() {
        ComplexLattice::new(&f, parse_vectors(&f, &v, "basis")?)?
    } else {
        ComplexLattice::from_generators(&f, &parse_vectors(&f, &v, "generators")?)?
    };
    Ok((f, l))
}

pub fn lattice_json(l: &ComplexLattice) -> Value {
    let basis: Vec<Vec<Value>> = l.basis().iter().map(|r| r.iter().map(number_json).collect()).collect();
    tagged(object(json!({ "conductor": l.conductor(), "basis": basis })))
}
