use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::gen;
use crate::universe::json::{decode, encode};
use crate::universe::{FinType, FunTable, SeqFun, Value, DEFAULT_CAP};

/// A finite double-negation-shift problem.
///
/// `δ` is given only through its action on singletons, as the table
/// `eps[n](p) = δ·n·{p}`. `φ` and `q` are finite sets of continuous
/// functionals, each a [`SeqFun`] reading at most `L` positions. `A_H` is a
/// boolean table over `n < nmax`, `a : X`, `b : Rb`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnsInstance {
    x: u32,
    rb: u32,
    b: u32,
    lookahead: usize,
    nmax: u32,
    eps: Vec<FunTable>,
    phi: Vec<SeqFun>,
    q: Vec<SeqFun>,
    a_h: Vec<bool>,
}

impl DnsInstance {
    /// Builds an instance, checking every invariant. `a_h` is indexed by
    /// `(n * |X| + a) * |Rb| + b`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        x: u32,
        rb: u32,
        b: u32,
        lookahead: usize,
        nmax: u32,
        eps: Vec<FunTable>,
        phi: Vec<SeqFun>,
        q: Vec<SeqFun>,
        a_h: Vec<bool>,
    ) -> Result<Self> {
        if x == 0 {
            return Err(Error::invariant("$.X", "|X| must be at least 1"));
        }
        if rb == 0 {
            return Err(Error::invariant("$.Rb", "|Rb| must be at least 1"));
        }
        if u64::from(nmax) < u64::from(b) + 3 {
            return Err(Error::invariant(
                "$.nmax",
                format!(
                    "nmax = {nmax} must be at least B + 3 = {}",
                    u64::from(b) + 3
                ),
            ));
        }
        let inst = DnsInstance {
            x,
            rb,
            b,
            lookahead,
            nmax,
            eps,
            phi,
            q,
            a_h,
        };
        let ctx = inst.context_type();
        ctx.cardinality_within(DEFAULT_CAP)
            .map_err(|e| Error::invariant("$.X", e.to_string()))?;
        if inst.eps.len() != nmax as usize {
            return Err(Error::invariant(
                "$.eps",
                format!("expected tables for n < {nmax}, got {}", inst.eps.len()),
            ));
        }
        for (n, t) in inst.eps.iter().enumerate() {
            if t.dom() != &ctx || t.cod() != &FinType::pow(inst.elem()) {
                return Err(Error::invariant(
                    format!("$.eps[{n}]"),
                    "table has the wrong type",
                ));
            }
        }
        let idx = FinType::pow(FinType::base(b + 1));
        for (i, f) in inst.phi.iter().enumerate() {
            inst.check_member(f, &format!("$.phi[{i}]"))?;
            if f.cod() != &idx {
                return Err(Error::invariant(
                    format!("$.phi[{i}]"),
                    format!("outputs must lie in {idx}"),
                ));
            }
        }
        for (i, f) in inst.q.iter().enumerate() {
            inst.check_member(f, &format!("$.q[{i}]"))?;
            if f.cod() != &FinType::pow(inst.counter_type()) {
                return Err(Error::invariant(
                    format!("$.q[{i}]"),
                    "outputs must be subsets of Rb",
                ));
            }
        }
        let want = nmax as usize * x as usize * rb as usize;
        if inst.a_h.len() != want {
            return Err(Error::invariant(
                "$.A_H",
                format!("expected {want} entries, got {}", inst.a_h.len()),
            ));
        }
        Ok(inst)
    }

    fn check_member(&self, f: &SeqFun, at: &str) -> Result<()> {
        if f.elem() != &self.elem() {
            return Err(Error::invariant(at, "reads sequences of the wrong type"));
        }
        if f.lookahead() > self.lookahead {
            return Err(Error::invariant(
                at,
                format!("lookahead {} exceeds L = {}", f.lookahead(), self.lookahead),
            ));
        }
        Ok(())
    }

    /// `X`.
    pub fn elem(&self) -> FinType {
        FinType::base(self.x)
    }

    /// `Rb`, the type of counterexamples `b`.
    pub fn counter_type(&self) -> FinType {
        FinType::base(self.rb)
    }

    /// `X → Pow(Rb)`, the type of contexts `p`.
    pub fn context_type(&self) -> FinType {
        FinType::fun(self.elem(), FinType::pow(self.counter_type()))
    }

    pub fn bound(&self) -> u32 {
        self.b
    }

    pub fn lookahead(&self) -> usize {
        self.lookahead
    }

    pub fn nmax(&self) -> u32 {
        self.nmax
    }

    pub fn phi(&self) -> &[SeqFun] {
        &self.phi
    }

    pub fn q(&self) -> &[SeqFun] {
        &self.q
    }

    /// `δ·n·{p}`.
    pub fn eps(&self, n: usize, p: &Value) -> Result<Value> {
        self.eps
            .get(n)
            .ok_or_else(|| {
                Error::invariant(
                    "$.eps",
                    format!("no selection for n = {n} (nmax = {})", self.nmax),
                )
            })?
            .apply(p)
    }

    /// `A_H(n, a, b)`.
    pub fn a_h(&self, n: usize, a: &Value, b: &Value) -> Result<bool> {
        let (a, b) = (a.as_base()? as usize, b.as_base()? as usize);
        if n >= self.nmax as usize || a >= self.x as usize || b >= self.rb as usize {
            return Err(Error::invariant(
                "$.A_H",
                format!("lookup ({n}, {a}, {b}) outside the table"),
            ));
        }
        Ok(self.a_h[(n * self.x as usize + a) * self.rb as usize + b])
    }

    /// The canonical JSON form. Every `A_H` entry is listed.
    pub fn to_json(&self) -> Json {
        let mut eps = Vec::new();
        for (n, t) in self.eps.iter().enumerate() {
            for (p, s) in t.pairs() {
                eps.push(json!([n, encode(&p), encode(s)]));
            }
        }
        let mut a_h = Vec::new();
        for n in 0..self.nmax {
            for a in 0..self.x {
                for b in 0..self.rb {
                    let i = ((n * self.x + a) * self.rb + b) as usize;
                    a_h.push(json!([n, a, b, self.a_h[i]]));
                }
            }
        }
        json!({
            "X": self.x,
            "Rb": self.rb,
            "B": self.b,
            "L": self.lookahead,
            "nmax": self.nmax,
            "eps": eps,
            "phi": self.phi.iter().map(SeqFun::to_json).collect::<Vec<_>>(),
            "q": self.q.iter().map(SeqFun::to_json).collect::<Vec<_>>(),
            "A_H": a_h,
        })
    }

    /// Parses JSON text and validates the instance.
    pub fn parse_str(text: &str) -> Result<DnsInstance> {
        let j: Json = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        DnsInstance::from_json(&j)
    }

    /// Decodes and validates an instance.
    ///
    /// `eps` must list every `(n, p)` with `n < nmax` exactly once. `A_H`
    /// entries that are omitted are false.
    pub fn from_json(j: &Json) -> Result<Self> {
        let obj = j
            .as_object()
            .ok_or_else(|| Error::schema("$", "expected an object"))?;
        let x = uint(obj, "X")?;
        let rb = uint(obj, "Rb")?;
        let b = uint(obj, "B")?;
        let lookahead = uint(obj, "L")? as usize;
        let nmax = uint(obj, "nmax")?;
        if x == 0 || rb == 0 {
            return Err(Error::invariant(
                if x == 0 { "$.X" } else { "$.Rb" },
                "cardinalities must be at least 1",
            ));
        }
        if u64::from(nmax) < u64::from(b) + 3 {
            return Err(Error::invariant(
                "$.nmax",
                format!(
                    "nmax = {nmax} must be at least B + 3 = {}",
                    u64::from(b) + 3
                ),
            ));
        }
        let elem = FinType::base(x);
        let counter = FinType::base(rb);
        let ctx = FinType::fun(elem.clone(), FinType::pow(counter.clone()));
        let n_ctx = ctx
            .cardinality_within(DEFAULT_CAP)
            .map_err(|e| Error::invariant("$.X", e.to_string()))? as usize;
        if nmax as usize * n_ctx > (DEFAULT_CAP * 16) as usize {
            return Err(Error::invariant("$.nmax", "eps table would be too large"));
        }

        let mut slots: Vec<Vec<Option<Value>>> = vec![vec![None; n_ctx]; nmax as usize];
        for (i, row) in array(obj, "eps")?.iter().enumerate() {
            let loc = format!("$.eps[{i}]");
            let row = row
                .as_array()
                .filter(|r| r.len() == 3)
                .ok_or_else(|| Error::schema(&loc, "expected [n, p, set]"))?;
            let n = row[0]
                .as_u64()
                .ok_or_else(|| Error::schema(format!("{loc}[0]"), "expected an integer"))?;
            if n >= u64::from(nmax) {
                return Err(Error::invariant(
                    format!("{loc}[0]"),
                    format!("n = {n} is not below nmax"),
                ));
            }
            let p = decode(&ctx, &row[1], &format!("{loc}[1]"))?;
            let s = decode(&FinType::pow(elem.clone()), &row[2], &format!("{loc}[2]"))?;
            let k = ctx.rank(&p)? as usize;
            if slots[n as usize][k].replace(s).is_some() {
                return Err(Error::schema(&loc, "duplicate (n, p) entry"));
            }
        }
        let mut eps = Vec::with_capacity(nmax as usize);
        for (n, row) in slots.into_iter().enumerate() {
            let mut outs = Vec::with_capacity(n_ctx);
            for (k, s) in row.into_iter().enumerate() {
                outs.push(s.ok_or_else(|| {
                    let p = ctx
                        .unrank(k as u64)
                        .map(|p| encode(&p))
                        .unwrap_or(Json::Null);
                    Error::invariant(
                        "$.eps",
                        format!("eps is not total: missing n = {n}, p = {p}"),
                    )
                })?);
            }
            eps.push(FunTable::new(
                ctx.clone(),
                FinType::pow(elem.clone()),
                outs,
            )?);
        }

        // Decode φ outputs permissively so an out-of-range index is reported
        // as an invariant violation naming the member.
        let loose = FinType::pow(FinType::base(u32::MAX));
        let idx = FinType::pow(FinType::base(b + 1));
        let mut phi = Vec::new();
        for (i, f) in array(obj, "phi")?.iter().enumerate() {
            let loc = format!("$.phi[{i}]");
            let f = SeqFun::from_json(&elem, &loose, f, &loc)?;
            for (w, out) in f.entries() {
                if let Some(big) = out
                    .as_set()?
                    .iter()
                    .find(|v| v.as_base().map_or(true, |i| i > b))
                {
                    return Err(Error::invariant(
                        &loc,
                        format!(
                            "phi[{i}] emits index {big} on {} but B = {b}",
                            Value::Seq(w)
                        ),
                    ));
                }
            }
            let f = SeqFun::new(
                elem.clone(),
                f.lookahead(),
                idx.clone(),
                f.outputs().to_vec(),
            )?;
            phi.push(f);
        }
        let mut q = Vec::new();
        for (i, f) in array(obj, "q")?.iter().enumerate() {
            q.push(SeqFun::from_json(
                &elem,
                &FinType::pow(counter.clone()),
                f,
                &format!("$.q[{i}]"),
            )?);
        }

        let mut a_h = vec![false; nmax as usize * x as usize * rb as usize];
        let mut seen = vec![false; a_h.len()];
        let a_rows = match obj.get("A_H") {
            None => &[][..],
            Some(v) => v
                .as_array()
                .ok_or_else(|| Error::schema("$.A_H", "expected an array"))?
                .as_slice(),
        };
        for (i, row) in a_rows.iter().enumerate() {
            let loc = format!("$.A_H[{i}]");
            let row = row
                .as_array()
                .filter(|r| r.len() == 4)
                .ok_or_else(|| Error::schema(&loc, "expected [n, a, b, bool]"))?;
            let num = |k: usize, lim: u32, what: &str| {
                row[k]
                    .as_u64()
                    .filter(|&v| v < u64::from(lim))
                    .ok_or_else(|| {
                        Error::schema(
                            format!("{loc}[{k}]"),
                            format!("expected {what} below {lim}"),
                        )
                    })
            };
            let (n, a, bb) = (num(0, nmax, "n")?, num(1, x, "a")?, num(2, rb, "b")?);
            let val = row[3]
                .as_bool()
                .ok_or_else(|| Error::schema(format!("{loc}[3]"), "expected a boolean"))?;
            let k = ((n * u64::from(x) + a) * u64::from(rb) + bb) as usize;
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::schema(&loc, "duplicate (n, a, b) entry"));
            }
            a_h[k] = val;
        }
        DnsInstance::new(x, rb, b, lookahead, nmax, eps, phi, q, a_h)
    }
}

fn uint(obj: &Map<String, Json>, key: &str) -> Result<u32> {
    obj.get(key)
        .ok_or_else(|| Error::schema(format!("$.{key}"), "missing field"))?
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| Error::schema(format!("$.{key}"), "expected a non-negative integer"))
}

fn array<'a>(obj: &'a Map<String, Json>, key: &str) -> Result<&'a [Json]> {
    Ok(obj
        .get(key)
        .ok_or_else(|| Error::schema(format!("$.{key}"), "missing field"))?
        .as_array()
        .ok_or_else(|| Error::schema(format!("$.{key}"), "expected an array"))?
        .as_slice())
}

/// Reads and validates an instance file.
pub fn parse_instance(path: impl AsRef<Path>) -> Result<DnsInstance> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    DnsInstance::parse_str(&text)
}

/// Sizes for generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DnsBounds {
    /// `|X|`.
    pub moves: u32,
    /// `|Rb|`.
    pub counter: u32,
    /// Largest `B`; each instance draws its own `B` up to this.
    pub b_max: u32,
    /// `L`.
    pub lookahead: usize,
    /// Most members in each of `φ` and `q`.
    pub max_members: usize,
    pub cases: u64,
}

impl DnsBounds {
    /// Rejects sizes the generator and checker are not meant for.
    pub fn validate(&self) -> Result<()> {
        if self.moves == 0 || self.counter == 0 || self.moves * self.counter > 6 {
            return Err(Error::invariant(
                "bounds.dns",
                "need |X|, |Rb| ≥ 1 and |X|·|Rb| ≤ 6",
            ));
        }
        if self.b_max > 3 || self.lookahead > 4 {
            return Err(Error::invariant(
                "bounds.dns",
                "b_max must be at most 3 and lookahead at most 4",
            ));
        }
        Ok(())
    }
}

impl Default for DnsBounds {
    fn default() -> Self {
        DnsBounds {
            moves: 2,
            counter: 1,
            b_max: 1,
            lookahead: 2,
            max_members: 2,
            cases: 1000,
        }
    }
}

/// Probabilities an instance may draw for `A_H(n, a, b)` being true. One is
/// chosen per instance so the sample covers sparse and dense predicates.
const A_H_DENSITIES: [f64; 3] = [0.5, 0.75, 1.0];

/// The instance for case `case` of a run under `seed`.
pub fn generate_case(seed: u64, case: u64, bounds: &DnsBounds) -> Result<DnsInstance> {
    generate_with(&mut gen::case_rng(seed, "dns/instance", case), bounds)
}

/// The instance for `seed`.
pub fn generate_instance(seed: u64, bounds: &DnsBounds) -> Result<DnsInstance> {
    generate_case(seed, 0, bounds)
}

fn generate_with(rng: &mut impl Rng, bounds: &DnsBounds) -> Result<DnsInstance> {
    let (x, rb) = (bounds.moves, bounds.counter);
    let b = rng.gen_range(0..=bounds.b_max);
    let nmax = b + 3;
    let elem = FinType::base(x);
    let counter = FinType::base(rb);
    let ctx = FinType::fun(elem.clone(), FinType::pow(counter.clone()));
    let pow_x = FinType::pow(elem.clone());
    let eps = (0..nmax)
        .map(|_| FunTable::tabulate(&ctx, &pow_x, DEFAULT_CAP, |_| gen::value(rng, &pow_x)))
        .collect::<Result<Vec<_>>>()?;
    let idx = FinType::pow(FinType::base(b + 1));
    let member = |rng: &mut _, cod: &FinType| {
        let l = rng_range(rng, bounds.lookahead);
        SeqFun::tabulate(elem.clone(), l, cod.clone(), |_| gen::value(rng, cod))
    };
    let n_phi = rng_range(rng, bounds.max_members);
    let phi = (0..n_phi)
        .map(|_| member(rng, &idx))
        .collect::<Result<Vec<_>>>()?;
    let pow_rb = FinType::pow(counter);
    let n_q = rng_range(rng, bounds.max_members);
    let q = (0..n_q)
        .map(|_| member(rng, &pow_rb))
        .collect::<Result<Vec<_>>>()?;
    let density = A_H_DENSITIES[rng.gen_range(0..A_H_DENSITIES.len())];
    let a_h = (0..nmax as usize * x as usize * rb as usize)
        .map(|_| rng.gen_bool(density))
        .collect();
    DnsInstance::new(x, rb, b, bounds.lookahead, nmax, eps, phi, q, a_h)
}

fn rng_range(rng: &mut impl Rng, max: usize) -> usize {
    rng.gen_range(0..=max)
}
