use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, DEFAULT_PRIME};
use crate::ncgb::{verdict, Checkpoint, Completion, GbConfig, MonomialOrder, Status, Verdict, VerdictJson};
use crate::presentation::{build_quantum_group, Presentation, Variant};
use crate::superpotential::TwistedSuperpotential;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub variant: Variant,
    pub bound: usize,
    /// Prime for the screening pass over rational input; `None` runs the input field directly.
    pub screen_prime: Option<u64>,
    /// Re-run over the input field whenever screening returns a certificate.
    pub certify: bool,
    /// Precedence as accepted by [`MonomialOrder::resolve`].
    pub order: String,
    pub max_steps: Option<u64>,
    pub max_basis_terms: Option<usize>,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            variant: Variant::Gl,
            bound: crate::ncgb::DEFAULT_BOUND,
            screen_prime: Some(DEFAULT_PRIME),
            certify: true,
            order: "default".into(),
            max_steps: None,
            max_basis_terms: None,
            cache_dir: None,
        }
    }
}

impl ClassifyConfig {
    fn gb(&self) -> GbConfig {
        GbConfig { bound: self.bound, max_steps: self.max_steps, max_basis_terms: self.max_basis_terms }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairResult {
    pub left: String,
    pub right: String,
    pub variant: Variant,
    pub presentation_hash: String,
    pub screening: Option<VerdictJson>,
    pub certification: Option<VerdictJson>,
    pub verdict: VerdictJson,
    pub config: ClassifyConfig,
}

impl PairResult {
    pub fn status(&self) -> &str {
        &self.verdict.status
    }
    pub fn is_zero(&self) -> bool {
        self.verdict.status == "zero"
    }
    pub fn is_nonzero(&self) -> bool {
        self.verdict.status == "nonzero"
    }
}

/// Hex SHA-256 of the parts, NUL-separated.
pub fn content_hash(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

/// Cache key of a completion: presentation, order and field; the bound is not part of it.
pub fn cache_key<F: Field>(pres: &Presentation<F>, order: &MonomialOrder) -> String {
    let order_text = serde_json::to_string(order).expect("order serializes");
    content_hash(&[&pres.to_json().to_json_string(), &order_text, &pres.field().spec().to_string()])
}

fn load_cached<F: Field>(dir: &Path, key: &str, field: &F, bound: usize) -> Option<Completion<F>> {
    let text = std::fs::read_to_string(dir.join(format!("{key}.json"))).ok()?;
    let cp = Checkpoint::parse(&text).ok()?;
    let c = Completion::from_checkpoint(field, &cp).ok()?;
    // a run that already went past `bound` would not match a fresh run at `bound`
    c.resumable_to(bound).then_some(c)
}

fn run_completion<F: Field>(pres: &Presentation<F>, order: &MonomialOrder, cfg: &ClassifyConfig) -> Result<Verdict> {
    let gb = cfg.gb();
    let key = cache_key(pres, order);
    let mut c = match cfg.cache_dir.as_deref().and_then(|d| load_cached(d, &key, pres.field(), gb.bound)) {
        Some(c) => c,
        None => Completion::new(pres, order)?,
    };
    c.run(&gb)?;
    let state = c.state();
    if let Some(dir) = &cfg.cache_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{key}.json")), c.checkpoint().to_json_string())?;
    }
    Ok(verdict(&state))
}

fn to_prime<F: Field>(pres: &Presentation<F>, fp: &PrimeField) -> Result<Presentation<PrimeField>> {
    let f = pres.field().clone();
    pres.map_field(fp, |c| {
        let (n, d) = f.to_parts(c);
        fp.parse_parts(&n, &d)
    })
}

/// Decides `GL_m(e,f) = 0` (or `SL_m`): screening over `F_p`, then certification
/// over the input field when screening produced a certificate.
pub fn classify_pair<F: Field>(
    left: &str,
    e: &TwistedSuperpotential<F>,
    right: &str,
    f: &TwistedSuperpotential<F>,
    cfg: &ClassifyConfig,
) -> Result<PairResult> {
    let pres = build_quantum_group(e, f, cfg.variant)?;
    classify_presentation(left, right, &pres, cfg)
}

pub fn classify_presentation<F: Field>(
    left: &str,
    right: &str,
    pres: &Presentation<F>,
    cfg: &ClassifyConfig,
) -> Result<PairResult> {
    let order = MonomialOrder::resolve(&cfg.order, pres)?;
    let presentation_hash = content_hash(&[&pres.to_json().to_json_string()]);
    let screen = match (pres.field().spec(), cfg.screen_prime) {
        (FieldSpec::Rationals, Some(p)) => {
            let fp = PrimeField::new(p)?;
            match to_prime(pres, &fp) {
                Ok(pp) => Some(run_completion(&pp, &order, cfg)?),
                // a denominator vanishes mod p: skip screening
                Err(Error::DenominatorVanishes { .. }) => None,
                Err(e) => return Err(e),
            }
        }
        _ => None,
    };
    let needs_exact = match &screen {
        None => true,
        Some(v) => cfg.certify && !matches!(v.status, Status::Inconclusive { .. }),
    };
    let cert = if needs_exact { Some(run_completion(pres, &order, cfg)?) } else { None };
    let final_verdict = cert.as_ref().or(screen.as_ref()).expect("one pass ran").to_json();
    Ok(PairResult {
        left: left.into(),
        right: right.into(),
        variant: cfg.variant,
        presentation_hash,
        screening: screen.as_ref().map(Verdict::to_json),
        certification: if screen.is_some() { cert.as_ref().map(Verdict::to_json) } else { None },
        verdict: final_verdict,
        config: cfg.clone(),
    })
}

/// A named superpotential with an optional expected component label.
#[derive(Debug, Clone)]
pub struct Item<F: Field> {
    pub id: String,
    pub expected: Option<String>,
    pub superpotential: TwistedSuperpotential<F>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub members: Vec<String>,
    /// Grouping relies on at least one inconclusive edge.
    pub conjectural: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableComparison {
    pub left: String,
    pub right: String,
    pub expected_same: bool,
    pub status: String,
    /// `consistent with Table 1` or `contradicts Table 1`.
    pub comparison: String,
    pub conjectural: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub items: Vec<String>,
    pub pairs: Vec<PairResult>,
    pub components: Vec<Component>,
    pub comparisons: Vec<TableComparison>,
    pub config: ClassifyConfig,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Pairwise classification of `items` with certified and conjectural groupings.
pub fn component_report<F: Field>(items: &[Item<F>], cfg: &ClassifyConfig) -> Result<ComponentReport> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[a].id.cmp(&items[b].id));
    let items: Vec<&Item<F>> = order.iter().map(|&i| &items[i]).collect();
    let jobs: Vec<(usize, usize)> = (0..items.len()).flat_map(|i| (i + 1..items.len()).map(move |j| (i, j))).collect();
    let results: Vec<Result<PairResult>> = jobs
        .par_iter()
        .map(|&(i, j)| {
            classify_pair(&items[i].id, &items[i].superpotential, &items[j].id, &items[j].superpotential, cfg)
        })
        .collect();
    let pairs = results.into_iter().collect::<Result<Vec<_>>>()?;

    let n = items.len();
    let mut certified = UnionFind::new(n);
    let mut conjectural = UnionFind::new(n);
    for (&(i, j), r) in jobs.iter().zip(&pairs) {
        match r.status() {
            "nonzero" => {
                certified.union(i, j);
                conjectural.union(i, j);
            }
            "inconclusive" => conjectural.union(i, j),
            _ => {}
        }
    }
    for (&(i, j), r) in jobs.iter().zip(&pairs) {
        if r.is_zero() && certified.find(i) == certified.find(j) {
            return Err(Error::InconsistentEvidence(format!(
                "{} and {} are joined by nonzero certificates but {} vanishes",
                items[i].id, items[j].id, r.presentation_hash
            )));
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        groups.entry(conjectural.find(i)).or_default().push(i);
    }
    let components = groups
        .values()
        .map(|members| {
            let roots: std::collections::BTreeSet<usize> = members.iter().map(|&m| certified.find(m)).collect();
            Component { members: members.iter().map(|&m| items[m].id.clone()).collect(), conjectural: roots.len() > 1 }
        })
        .collect();
    let comparisons = jobs
        .iter()
        .zip(&pairs)
        .filter_map(|(&(i, j), r)| {
            let (a, b) = (items[i].expected.as_ref()?, items[j].expected.as_ref()?);
            let expected_same = a == b;
            let observed_same = match r.status() {
                "zero" => Some(false),
                "nonzero" => Some(true),
                _ => None,
            };
            let consistent = observed_same.map_or(expected_same, |o| o == expected_same);
            Some(TableComparison {
                left: items[i].id.clone(),
                right: items[j].id.clone(),
                expected_same,
                status: r.status().to_string(),
                comparison: if consistent { "consistent with Table 1" } else { "contradicts Table 1" }.into(),
                conjectural: observed_same.is_none(),
            })
        })
        .collect();
    Ok(ComponentReport {
        items: items.iter().map(|i| i.id.clone()).collect(),
        pairs,
        components,
        comparisons,
        config: cfg.clone(),
    })
}

impl ComponentReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{:<12} {:<12} {:<13} {:>7} {:>9}\n", "left", "right", "status", "witness", "bound"));
        for p in &self.pairs {
            let w = p.verdict.witness_degree.map_or("-".to_string(), |d| d.to_string());
            s.push_str(&format!(
                "{:<12} {:<12} {:<13} {:>7} {:>9}\n",
                p.left, p.right, p.verdict.status, w, p.verdict.bound
            ));
        }
        for (k, c) in self.components.iter().enumerate() {
            let tag = if c.conjectural { " (conjectural)" } else { "" };
            s.push_str(&format!("component {}: {}{}\n", k + 1, c.members.join(", "), tag));
        }
        for c in &self.comparisons {
            let tag = if c.conjectural { " (conjectural)" } else { "" };
            s.push_str(&format!("{} / {}: {}{}\n", c.left, c.right, c.comparison, tag));
        }
        s
    }
}

/// Drops `elapsed_ms` fields so that reports can be compared across runs.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
