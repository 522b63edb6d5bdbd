//! Degree-truncated noncommutative Gröbner bases in the free algebra.
//!
//! Words are ordered deglex by a generator precedence (rank 0 largest).
//! Work items, i.e. input relations, re-queued basis elements and overlap
//! obstructions, are processed strictly by ascending degree, FIFO within a degree.
//! Obstructions above the bound are kept so that an empty queue really means a
//! complete basis.

mod trie;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Letter, NcPoly, Word};
use crate::presentation::{preferred_order, Presentation};

use trie::{count_avoiding, Trie};

pub const DEFAULT_BOUND: usize = 8;

/// Deglex with a generator precedence: `precedence[r]` is the generator of rank `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialOrder {
    precedence: Vec<usize>,
}

impl MonomialOrder {
    /// Generators in presentation order.
    pub fn identity(n: usize) -> Self {
        MonomialOrder { precedence: (0..n).collect() }
    }

    pub fn from_precedence(precedence: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; precedence.len()];
        for &g in &precedence {
            if g >= seen.len() || std::mem::replace(&mut seen[g], true) {
                return Err(Error::Invalid(format!("{precedence:?} is not a permutation")));
            }
        }
        Ok(MonomialOrder { precedence })
    }

    /// Parses `identity` or a comma-separated list of generator names or 1-based positions.
    pub fn parse(text: &str, gens: &[String]) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "identity" {
            return Ok(Self::identity(gens.len()));
        }
        let prec = text
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                if let Some(i) = gens.iter().position(|g| g == tok) {
                    return Ok(i);
                }
                match tok.parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => Err(Error::Parse(format!("unknown generator `{tok}` in order"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if prec.len() != gens.len() {
            return Err(Error::Parse(format!(
                "order lists {} generators, presentation has {}",
                prec.len(),
                gens.len()
            )));
        }
        Self::from_precedence(prec)
    }

    /// Like [`parse`](Self::parse), with `default` meaning [`preferred_order`] of `pres`.
    pub fn resolve<F: Field>(text: &str, pres: &Presentation<F>) -> Result<Self> {
        match text.trim() {
            "default" => Ok(preferred_order(pres)),
            other => Self::parse(other, pres.gens()),
        }
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn len(&self) -> usize {
        self.precedence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.precedence.is_empty()
    }

    fn rank_of(&self) -> Vec<Letter> {
        let mut r = vec![0; self.precedence.len()];
        for (rank, &g) in self.precedence.iter().enumerate() {
            r[g] = rank as Letter;
        }
        r
    }

    pub fn names(&self, gens: &[String]) -> Vec<String> {
        self.precedence.iter().map(|&g| gens[g].clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbConfig {
    pub bound: usize,
    /// Total rewriting steps allowed across the run.
    pub max_steps: Option<u64>,
    /// Total number of terms allowed in the basis.
    pub max_basis_terms: Option<usize>,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig { bound: DEFAULT_BOUND, max_steps: None, max_basis_terms: None }
    }
}

impl GbConfig {
    pub fn with_bound(bound: usize) -> Self {
        GbConfig { bound, ..Self::default() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    pub reductions: u64,
    pub steps: u64,
    pub obstructions_processed: u64,
    pub obstructions_skipped: u64,
    pub basis_size: usize,
    pub basis_terms: usize,
    pub pending: usize,
    pub elapsed_ms: u64,
}

/// Snapshot of a completion run; words are in the presentation's generator letters.
#[derive(Debug, Clone, PartialEq)]
pub struct GBState<F: Field> {
    pub basis: Vec<NcPoly<F>>,
    /// Leading word of each basis element under the run's order.
    pub leading_words: Vec<Word>,
    pub processed_degree: usize,
    pub queue_empty: bool,
    pub witness_degree: Option<usize>,
    pub homogeneous: bool,
    pub order: MonomialOrder,
    pub gens: Vec<String>,
    pub field: F,
    pub stats: GbStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    ZeroCertified { witness_degree: usize },
    NonzeroCertified,
    Inconclusive { bound: usize },
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::ZeroCertified { .. } => "zero",
            Status::NonzeroCertified => "nonzero",
            Status::Inconclusive { .. } => "inconclusive",
        }
    }
    pub fn is_zero(&self) -> bool {
        matches!(self, Status::ZeroCertified { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub bound: usize,
    pub field: String,
    pub order: Vec<String>,
    pub stats: GbStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: String,
    pub witness_degree: Option<usize>,
    pub bound: usize,
    pub field: String,
    pub order: Vec<String>,
    pub stats: GbStats,
}

impl Verdict {
    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            status: self.status.name().into(),
            witness_degree: match self.status {
                Status::ZeroCertified { witness_degree } => Some(witness_degree),
                _ => None,
            },
            bound: self.bound,
            field: self.field.clone(),
            order: self.order.clone(),
            stats: self.stats.clone(),
        }
    }
}

pub fn verdict<F: Field>(state: &GBState<F>) -> Verdict {
    let status = match (state.witness_degree, state.queue_empty) {
        (Some(w), _) => Status::ZeroCertified { witness_degree: w },
        (None, true) => Status::NonzeroCertified,
        (None, false) => Status::Inconclusive { bound: state.processed_degree },
    };
    Verdict {
        status,
        bound: state.processed_degree,
        field: state.field.spec().to_string(),
        order: state.order.names(&state.gens),
        stats: state.stats.clone(),
    }
}

/// Normal-word counts in degrees `0..=d`.
pub fn truncated_hilbert<F: Field>(state: &GBState<F>, d: usize) -> Result<Vec<u128>> {
    if !state.homogeneous {
        return Err(Error::Inhomogeneous);
    }
    if !state.queue_empty && state.processed_degree < d {
        return Err(Error::InsufficientDegree { requested: d, processed: state.processed_degree });
    }
    let lws: Vec<&[Letter]> = state.leading_words.iter().filter(|w| !w.is_empty()).map(Word::letters).collect();
    Ok(count_avoiding(state.gens.len(), &lws, d))
}

/// Terms as `(rank letters, numerator, denominator)`.
type EncodedPoly = Vec<(Vec<Letter>, String, String)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
enum Item {
    Poly { terms: EncodedPoly },
    Pair { left: usize, right: usize, shift: usize },
}

#[derive(Debug, Clone)]
struct Element<F: Field> {
    poly: NcPoly<F>,
    alive: bool,
}

enum Work<F: Field> {
    Poly(NcPoly<F>),
    Pair { left: usize, right: usize, shift: usize },
}

/// A resumable completion: `run` to one bound, then `run` again to a higher one.
pub struct Completion<F: Field> {
    field: F,
    gens: Vec<String>,
    order: MonomialOrder,
    to_rank: Vec<Letter>,
    homogeneous: bool,
    elems: Vec<Element<F>>,
    trie: Trie,
    queue: BTreeMap<(usize, u64), Work<F>>,
    seq: u64,
    witness: Option<usize>,
    processed: usize,
    stats: GbStats,
}

impl<F: Field> Completion<F> {
    pub fn new(pres: &Presentation<F>, order: &MonomialOrder) -> Result<Self> {
        if order.len() != pres.gens().len() {
            return Err(Error::DimensionMismatch(format!(
                "order has {} generators, presentation {}",
                order.len(),
                pres.gens().len()
            )));
        }
        let to_rank = order.rank_of();
        let field = pres.field().clone();
        let mut c = Completion {
            field: field.clone(),
            gens: pres.gens().to_vec(),
            order: order.clone(),
            to_rank: to_rank.clone(),
            homogeneous: pres.is_homogeneous(),
            elems: Vec::new(),
            trie: Trie::new(pres.gens().len().max(1)),
            queue: BTreeMap::new(),
            seq: 0,
            witness: None,
            processed: 0,
            stats: GbStats::default(),
        };
        for r in pres.rels() {
            let r = r.map_letters(&field, |l| to_rank[l as usize]);
            if let Some(d) = r.degree() {
                c.push(d, Work::Poly(r));
            }
        }
        Ok(c)
    }

    fn push(&mut self, degree: usize, w: Work<F>) {
        self.queue.insert((degree, self.seq), w);
        self.seq += 1;
    }

    /// Processes every work item of degree `≤ bound`.
    pub fn run(&mut self, cfg: &GbConfig) -> Result<()> {
        let start = Instant::now();
        let result = self.run_inner(cfg);
        self.stats.elapsed_ms += start.elapsed().as_millis() as u64;
        self.refresh_stats();
        result
    }

    fn run_inner(&mut self, cfg: &GbConfig) -> Result<()> {
        if self.witness.is_some() {
            return Ok(());
        }
        while let Some(entry) = self.queue.first_entry() {
            let degree = entry.key().0;
            if degree > cfg.bound {
                break;
            }
            let work = entry.remove();
            let candidate = match work {
                Work::Poly(p) => p,
                Work::Pair { left, right, shift } => {
                    if !self.elems[left].alive || !self.elems[right].alive {
                        self.stats.obstructions_skipped += 1;
                        continue;
                    }
                    self.stats.obstructions_processed += 1;
                    self.s_poly(left, right, shift)
                }
            };
            let r = self.reduce_inner(candidate.into_terms(), cfg)?;
            if r.is_zero() {
                continue;
            }
            if r.is_constant() {
                self.witness = Some(degree);
                self.elems.iter_mut().for_each(|e| e.alive = false);
                self.elems.push(Element { poly: NcPoly::constant(&self.field, self.field.one()), alive: true });
                self.queue.clear();
                self.processed = self.processed.max(degree);
                return Ok(());
            }
            self.insert(r.make_monic(&self.field));
            if let Some(max) = cfg.max_basis_terms {
                let terms: usize = self.elems.iter().filter(|e| e.alive).map(|e| e.poly.len()).sum();
                if terms > max {
                    return Err(Error::BudgetExceeded(format!("basis exceeds {max} terms")));
                }
            }
        }
        self.processed = self.processed.max(cfg.bound);
        Ok(())
    }

    fn s_poly(&self, left: usize, right: usize, shift: usize) -> NcPoly<F> {
        let f = &self.elems[left].poly;
        let g = &self.elems[right].poly;
        let lf = f.leading_word().expect("nonzero");
        let lg = g.leading_word().expect("nonzero");
        let z = &lg.letters()[lf.len() - shift..];
        let x = &lf.letters()[..shift];
        f.wrap(&[], z).sub(&self.field, &g.wrap(x, &[]))
    }

    fn insert(&mut self, p: NcPoly<F>) {
        let id = self.elems.len();
        let lw = p.leading_word().expect("nonzero").clone();
        for h in 0..self.elems.len() {
            if !self.elems[h].alive {
                continue;
            }
            let lh = self.elems[h].poly.leading_word().expect("nonzero").clone();
            if lh.find(lw.letters()).is_some() {
                self.elems[h].alive = false;
                self.trie.remove(&lh);
                let poly = self.elems[h].poly.clone();
                self.push(lh.len(), Work::Poly(poly));
            }
        }
        self.trie.insert(&lw, id);
        self.elems.push(Element { poly: p, alive: true });
        let l = lw.letters();
        for h in 0..=id {
            if !self.elems[h].alive {
                continue;
            }
            let lh = self.elems[h].poly.leading_word().expect("nonzero").clone();
            let lh = lh.letters();
            // suffix of lw = prefix of lh
            for shift in 1..l.len() {
                let y = &l[shift..];
                if y.len() < lh.len() && lh.starts_with(y) {
                    self.push(shift + lh.len(), Work::Pair { left: id, right: h, shift });
                }
            }
            if h == id {
                continue;
            }
            // suffix of lh = prefix of lw
            for shift in 1..lh.len() {
                let y = &lh[shift..];
                if y.len() < l.len() && l.starts_with(y) {
                    self.push(shift + l.len(), Work::Pair { left: h, right: id, shift });
                }
            }
        }
    }

    fn reduce_inner(&mut self, terms: Vec<(Word, F::Elem)>, cfg: &GbConfig) -> Result<NcPoly<F>> {
        self.stats.reductions += 1;
        let f = &self.field;
        let mut heap: BTreeMap<Word, F::Elem> = BTreeMap::new();
        for (w, c) in terms {
            add_into(f, &mut heap, w, c);
        }
        let mut out = Vec::new();
        while let Some((w, c)) = heap.pop_last() {
            match self.trie.find_in(w.letters()) {
                Some((id, start)) => {
                    self.stats.steps += 1;
                    if let Some(max) = cfg.max_steps {
                        if self.stats.steps > max {
                            return Err(Error::BudgetExceeded(format!("more than {max} rewriting steps")));
                        }
                    }
                    let g = &self.elems[id].poly;
                    let glen = g.leading_word().expect("nonzero").len();
                    let (left, rest) = w.letters().split_at(start);
                    let right = &rest[glen..];
                    let neg = f.neg(&c);
                    for (gw, gc) in &g.terms()[1..] {
                        add_into(f, &mut heap, gw.wrap(left, right), f.mul(&neg, gc));
                    }
                }
                None => out.push((w, c)),
            }
        }
        Ok(NcPoly::from_sorted_unchecked(out))
    }

    /// Normal form of `p` (given in presentation letters) modulo the current basis.
    pub fn reduce(&mut self, p: &NcPoly<F>) -> Result<NcPoly<F>> {
        let to_rank = self.to_rank.clone();
        let q = p.map_letters(&self.field, |l| to_rank[l as usize]);
        let r =
            self.reduce_inner(q.into_terms(), &GbConfig { bound: usize::MAX, max_steps: None, max_basis_terms: None })?;
        let prec = self.order.precedence().to_vec();
        Ok(r.map_letters(&self.field, |l| prec[l as usize] as Letter))
    }

    fn refresh_stats(&mut self) {
        let alive = self.elems.iter().filter(|e| e.alive);
        self.stats.basis_size = alive.clone().count();
        self.stats.basis_terms = alive.map(|e| e.poly.len()).sum();
        self.stats.pending = self.queue.len();
    }

    /// Whether running this state to `bound` yields what a fresh run to `bound` would.
    pub fn resumable_to(&self, bound: usize) -> bool {
        match self.witness {
            Some(w) => w <= bound,
            None => self.processed <= bound,
        }
    }

    pub fn is_zero_certified(&self) -> bool {
        self.witness.is_some()
    }

    /// Snapshot with a tail-reduced basis in presentation letters, sorted by leading word.
    pub fn state(&mut self) -> GBState<F> {
        let ids: Vec<usize> = (0..self.elems.len()).filter(|&i| self.elems[i].alive).collect();
        let unbounded = GbConfig { bound: usize::MAX, max_steps: None, max_basis_terms: None };
        let counted = (self.stats.reductions, self.stats.steps);
        let mut basis = Vec::with_capacity(ids.len());
        for id in ids {
            let p = self.elems[id].poly.clone();
            let mut terms = p.into_terms();
            let head = terms.remove(0);
            let tail = self.reduce_inner(terms, &unbounded).expect("no budget");
            let mut all = vec![head];
            all.extend(tail.into_terms());
            basis.push(NcPoly::from_sorted_unchecked(all));
        }
        (self.stats.reductions, self.stats.steps) = counted;
        basis.sort_by(|a, b| a.leading_word().cmp(&b.leading_word()));
        let prec = self.order.precedence().to_vec();
        let back = |l: Letter| prec[l as usize] as Letter;
        let leading_words = basis.iter().map(|p| p.leading_word().expect("nonzero").map_letters(back)).collect();
        let basis = basis.into_iter().map(|p| p.map_letters(&self.field, back)).collect();
        self.refresh_stats();
        GBState {
            basis,
            leading_words,
            processed_degree: self.processed,
            queue_empty: self.queue.is_empty(),
            witness_degree: self.witness,
            homogeneous: self.homogeneous,
            order: self.order.clone(),
            gens: self.gens.clone(),
            field: self.field.clone(),
            stats: self.stats.clone(),
        }
    }

    /// Serializable snapshot of the full run state.
    pub fn checkpoint(&self) -> Checkpoint {
        let enc = |p: &NcPoly<F>| -> EncodedPoly {
            p.terms()
                .iter()
                .map(|(w, c)| {
                    let (n, d) = self.field.to_parts(c);
                    (w.letters().to_vec(), n, d)
                })
                .collect()
        };
        Checkpoint {
            field: self.field.spec().to_string(),
            gens: self.gens.clone(),
            order: self.order.clone(),
            homogeneous: self.homogeneous,
            elements: self.elems.iter().map(|e| (enc(&e.poly), e.alive)).collect(),
            queue: self
                .queue
                .iter()
                .map(|(&(d, s), w)| {
                    let item = match w {
                        Work::Poly(p) => Item::Poly { terms: enc(p) },
                        Work::Pair { left, right, shift } => Item::Pair { left: *left, right: *right, shift: *shift },
                    };
                    (d, s, item)
                })
                .collect(),
            seq: self.seq,
            witness: self.witness,
            processed: self.processed,
            stats: self.stats.clone(),
        }
    }

    pub fn from_checkpoint(field: &F, cp: &Checkpoint) -> Result<Self> {
        if field.spec().to_string() != cp.field {
            return Err(Error::Invalid(format!("checkpoint is over {}, not {}", cp.field, field.spec())));
        }
        let dec = |terms: &[(Vec<Letter>, String, String)]| -> Result<NcPoly<F>> {
            let t = terms
                .iter()
                .map(|(w, n, d)| Ok((Word::from_letters(w), field.parse_parts(n, d)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(NcPoly::from_terms(field, t))
        };
        let mut trie = Trie::new(cp.gens.len().max(1));
        let mut elems = Vec::with_capacity(cp.elements.len());
        for (id, (terms, alive)) in cp.elements.iter().enumerate() {
            let poly = dec(terms)?;
            if *alive {
                if let Some(lw) = poly.leading_word() {
                    trie.insert(lw, id);
                }
            }
            elems.push(Element { poly, alive: *alive });
        }
        let mut queue = BTreeMap::new();
        for (d, s, item) in &cp.queue {
            let w = match item {
                Item::Poly { terms } => Work::Poly(dec(terms)?),
                Item::Pair { left, right, shift } => {
                    if *left >= elems.len() || *right >= elems.len() {
                        return Err(Error::Invalid("checkpoint obstruction refers to a missing element".into()));
                    }
                    Work::Pair { left: *left, right: *right, shift: *shift }
                }
            };
            queue.insert((*d, *s), w);
        }
        Ok(Completion {
            field: field.clone(),
            gens: cp.gens.clone(),
            to_rank: cp.order.rank_of(),
            order: cp.order.clone(),
            homogeneous: cp.homogeneous,
            elems,
            trie,
            queue,
            seq: cp.seq,
            witness: cp.witness,
            processed: cp.processed,
            stats: cp.stats.clone(),
        })
    }
}

fn add_into<F: Field>(f: &F, heap: &mut BTreeMap<Word, F::Elem>, w: Word, c: F::Elem) {
    use std::collections::btree_map::Entry;
    match heap.entry(w) {
        Entry::Vacant(v) => {
            if !f.is_zero(&c) {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            let s = f.add(o.get(), &c);
            if f.is_zero(&s) {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// JSON-serializable run state, in rank letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    field: String,
    gens: Vec<String>,
    order: MonomialOrder,
    homogeneous: bool,
    elements: Vec<(EncodedPoly, bool)>,
    queue: Vec<(usize, u64, Item)>,
    seq: u64,
    witness: Option<usize>,
    processed: usize,
    stats: GbStats,
}

impl Checkpoint {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("checkpoint serializes")
    }
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Runs a completion to `cfg.bound` under `order`.
pub fn complete<F: Field>(pres: &Presentation<F>, cfg: &GbConfig, order: &MonomialOrder) -> Result<GBState<F>> {
    if cfg.bound < pres.max_relation_degree() {
        return Err(Error::Invalid(format!(
            "bound {} is below the maximal relation degree {}",
            cfg.bound,
            pres.max_relation_degree()
        )));
    }
    let mut c = Completion::new(pres, order)?;
    c.run(cfg)?;
    Ok(c.state())
}

/// [`complete`] with the presentation's own generator order, followed by [`verdict`].
pub fn decide<F: Field>(pres: &Presentation<F>, cfg: &GbConfig) -> Result<Verdict> {
    Ok(verdict(&complete(pres, cfg, &preferred_order(pres))?))
}

/// Independent check of a complete basis through the diamond lemma: every input
/// relation and every overlap of basis elements reduces to zero.
pub fn verify_complete_basis<F: Field>(pres: &Presentation<F>, state: &GBState<F>) -> bool {
    let field = pres.field();
    let rank = state.order.rank_of();
    let relabel = |p: &NcPoly<F>| p.map_letters(field, |l| rank[l as usize]);
    let basis: Vec<NcPoly<F>> = state.basis.iter().map(|b| relabel(b).make_monic(field)).collect();
    if pres.rels().iter().any(|r| !reduce(field, &relabel(r), &basis).is_zero()) {
        return false;
    }
    basis.iter().enumerate().all(|(i, f)| {
        basis[i..].iter().all(|g| overlaps(field, f, g).iter().all(|s| reduce(field, s, &basis).is_zero()))
    })
}

/// Normal form of `p` modulo `basis` (monic, leading words as given).
pub fn reduce<F: Field>(field: &F, p: &NcPoly<F>, basis: &[NcPoly<F>]) -> NcPoly<F> {
    let alphabet = basis
        .iter()
        .chain([p])
        .flat_map(|q| q.terms().iter().flat_map(|(w, _)| w.letters().iter().copied()))
        .max()
        .map_or(1, |m| m as usize + 1);
    let mut trie = Trie::new(alphabet);
    let basis: Vec<NcPoly<F>> = basis.iter().map(|b| b.make_monic(field)).collect();
    for (i, b) in basis.iter().enumerate().rev() {
        if let Some(lw) = b.leading_word() {
            trie.insert(lw, i);
        }
    }
    let mut heap: BTreeMap<Word, F::Elem> = BTreeMap::new();
    for (w, c) in p.terms() {
        add_into(field, &mut heap, w.clone(), c.clone());
    }
    let mut out = Vec::new();
    while let Some((w, c)) = heap.pop_last() {
        match trie.find_in(w.letters()) {
            Some((id, start)) => {
                let g = &basis[id];
                let glen = g.leading_word().expect("nonzero").len();
                let (left, rest) = w.letters().split_at(start);
                let right = &rest[glen..];
                let neg = field.neg(&c);
                for (gw, gc) in &g.terms()[1..] {
                    add_into(field, &mut heap, gw.wrap(left, right), field.mul(&neg, gc));
                }
            }
            None => out.push((w, c)),
        }
    }
    NcPoly::from_sorted_unchecked(out)
}

/// S-polynomials of all overlaps and inclusions between `f` and `g` (both monic).
pub fn overlaps<F: Field>(field: &F, f: &NcPoly<F>, g: &NcPoly<F>) -> Vec<NcPoly<F>> {
    let (Some(lf), Some(lg)) = (f.leading_word(), g.leading_word()) else {
        return Vec::new();
    };
    let (a, b) = (lf.letters(), lg.letters());
    let mut out = Vec::new();
    let mut push_overlap = |f: &NcPoly<F>, g: &NcPoly<F>, a: &[Letter], b: &[Letter]| {
        for shift in 1..a.len() {
            let y = &a[shift..];
            if y.len() < b.len() && b.starts_with(y) {
                let z = &b[y.len()..];
                out.push(f.wrap(&[], z).sub(field, &g.wrap(&a[..shift], &[])));
            }
        }
    };
    push_overlap(f, g, a, b);
    if f != g {
        push_overlap(g, f, b, a);
    }
    if f != g {
        if let Some(pos) = lf.find(b) {
            out.push(f.sub(field, &g.wrap(&a[..pos], &a[pos + b.len()..])));
        } else if let Some(pos) = lg.find(a) {
            out.push(g.sub(field, &f.wrap(&b[..pos], &b[pos + a.len()..])));
        }
    }
    out
}
