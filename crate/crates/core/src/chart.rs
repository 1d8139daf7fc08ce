//! Charts, neighbour relations, coverings, virtual members and the
//! f-characteristic: the combinatorial bookkeeping over a word.
//!
//! The chart of a word holds its maximal GFP occurrences of measure ≥ τ.
//! Below the threshold sits the band [τ−2ε, τ) where an occurrence may still
//! be a *virtual* member: some admissible sequence of replacements of
//! neighbouring occurrences pumps its measure up to τ.  Virtual membership is
//! decided by a bounded search over replacement sequences, with incident
//! monomials truncated by the configured w-exponent bound, so the reported
//! status is always relative to that bound.

use crate::construction::Params;
use crate::freegroup::Word;
use crate::gfp::{incident_monomials_bounded, maximal_occurrences, Occurrence};
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChartError {
    #[error("occurrences come from different hosts")]
    DifferentHosts,
    #[error("occurrences are not ordered left to right")]
    NotOrdered,
    #[error("occurrence is not a maximal occurrence of its host")]
    NotMaximal,
}

/// Mutual position of two adjacent chart members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    Separated,
    Touch,
    Overlap(Word),
}

/// The chart of a word: members of measure ≥ τ plus the relation between
/// each adjacent pair.
#[derive(Debug, Clone)]
pub struct Chart {
    pub host: Word,
    pub members: Vec<Occurrence>,
    pub relations: Vec<Relation>,
}

/// Covering statistics of a word: minimal covering size, virtual member
/// count, and the fully-covered / not-fully-covered partition of M(U).
#[derive(Debug, Clone)]
pub struct CoverStats {
    pub n_min: usize,
    pub k_tau: usize,
    pub nfc: Vec<Occurrence>,
    pub fc: Vec<Occurrence>,
}

/// The pair f(Z) = (N(Z), K_τ(Z)), ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FChar {
    pub n: usize,
    pub k: usize,
}

impl std::fmt::Display for FChar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.n, self.k)
    }
}

pub fn neighbor_relation(a: &Occurrence, b: &Occurrence) -> Result<Relation, ChartError> {
    if a.host != b.host {
        return Err(ChartError::DifferentHosts);
    }
    if a.start > b.start || (a.start == b.start && a.end != b.end) {
        return Err(ChartError::NotOrdered);
    }
    if a.end < b.start {
        Ok(Relation::Separated)
    } else if a.end == b.start {
        Ok(Relation::Touch)
    } else {
        Ok(Relation::Overlap(a.host.slice(b.start, a.end.min(b.end))))
    }
}

/// Members of measure ≥ τ with adjacent relations.
pub fn chart_of(u: &Word, p: &Params) -> Chart {
    let tau_ys = p.tau_ys();
    let members: Vec<Occurrence> = maximal_occurrences(u, p)
        .into_iter()
        .filter(|o| o.ys() >= tau_ys)
        .collect();
    let relations = members
        .windows(2)
        .map(|w| neighbor_relation(&w[0], &w[1]).expect("members are ordered"))
        .collect();
    Chart { host: u.clone(), members, relations }
}

/// Minimum number of intervals needed to cover the union of `spans`
/// (the classic greedy sweep; spans must form one gap-free component).
fn min_interval_cover(spans: &[(usize, usize)]) -> usize {
    if spans.is_empty() {
        return 0;
    }
    let lo = spans.iter().map(|s| s.0).min().unwrap();
    let hi = spans.iter().map(|s| s.1).max().unwrap();
    let mut pos = lo;
    let mut count = 0;
    while pos < hi {
        let best = spans
            .iter()
            .filter(|s| s.0 <= pos)
            .map(|s| s.1)
            .max()
            .expect("component is gap-free");
        debug_assert!(best > pos, "gap inside a covering component");
        count += 1;
        pos = best;
    }
    count
}

/// Splits occurrences (sorted by start) into gap-free components.
fn components(occ: &[Occurrence]) -> Vec<Vec<usize>> {
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut cur_end = 0usize;
    for (i, o) in occ.iter().enumerate() {
        if cur.is_empty() || o.start <= cur_end {
            if cur.is_empty() {
                cur_end = o.end;
            } else {
                cur_end = cur_end.max(o.end);
            }
            cur.push(i);
        } else {
            comps.push(std::mem::take(&mut cur));
            cur.push(i);
            cur_end = o.end;
        }
    }
    if !cur.is_empty() {
        comps.push(cur);
    }
    comps
}

/// Partition of M(U) into occurrences not fully covered by the others and
/// those fully covered.
fn nfc_partition(occ: &[Occurrence]) -> (Vec<usize>, Vec<usize>) {
    let mut nfc = Vec::new();
    let mut fc = Vec::new();
    for (i, o) in occ.iter().enumerate() {
        let mut covered: Vec<(usize, usize)> = occ
            .iter()
            .enumerate()
            .filter(|&(j, other)| j != i && other.overlaps(o))
            .map(|(_, other)| (other.start.max(o.start), other.end.min(o.end)))
            .collect();
        covered.sort_unstable();
        let mut pos = o.start;
        for (a, b) in covered {
            if a > pos {
                break;
            }
            pos = pos.max(b);
        }
        if pos >= o.end {
            fc.push(i);
        } else {
            nfc.push(i);
        }
    }
    (nfc, fc)
}

pub fn cover_stats(u: &Word, p: &Params) -> CoverStats {
    let occ = maximal_occurrences(u, p);
    let mut n_min = 0;
    for comp in components(&occ) {
        let spans: Vec<(usize, usize)> = comp.iter().map(|&i| occ[i].span()).collect();
        n_min += min_interval_cover(&spans);
    }
    let (nfc_idx, fc_idx) = nfc_partition(&occ);
    let virtuals = virtual_members(u, p);
    CoverStats {
        n_min,
        k_tau: virtuals.len(),
        nfc: nfc_idx.into_iter().map(|i| occ[i].clone()).collect(),
        fc: fc_idx.into_iter().map(|i| occ[i].clone()).collect(),
    }
}

pub fn f_char(u: &Word, p: &Params) -> FChar {
    let stats = cover_stats(u, p);
    FChar { n: stats.n_min, k: stats.k_tau }
}

/// The unique not-fully-covered occurrence that is not separated from
/// `occ[i]` on the given side, if any.
fn essential_neighbor(
    occ: &[Occurrence],
    nfc_idx: &[usize],
    i: usize,
    left: bool,
) -> Option<usize> {
    let me = &occ[i];
    let mut best: Option<usize> = None;
    for &j in nfc_idx {
        if j == i {
            continue;
        }
        let other = &occ[j];
        let adjacent = if left {
            other.start < me.start && other.end >= me.start
        } else {
            other.start > me.start && other.start <= me.end
        };
        if adjacent {
            best = match best {
                None => Some(j),
                Some(b) => {
                    // closest one wins; the paper guarantees uniqueness
                    if left {
                        Some(if occ[j].start > occ[b].start { j } else { b })
                    } else {
                        Some(if occ[j].start < occ[b].start { j } else { b })
                    }
                }
            };
        }
    }
    best
}

/// Replaces `span` of `word` by `rep` (no cancellation may occur unless
/// `rep` is empty).  Returns the new word and the position shift applied to
/// everything right of the span, plus how many letters cancelled on each
/// side of the junction when `rep` is empty.
pub(crate) fn splice(
    word: &Word,
    span: (usize, usize),
    rep: &Word,
) -> (Word, i64, usize) {
    let left = word.slice(0, span.0);
    let right = word.slice(span.1, word.len());
    if rep.is_empty() {
        let joined = left.multiply(&right);
        let cancelled = (left.len() + right.len() - joined.len()) / 2;
        let shift = rep.len() as i64 - (span.1 - span.0) as i64 - 2 * cancelled as i64;
        (joined, shift, cancelled)
    } else {
        let mid = left.multiply(rep);
        debug_assert_eq!(mid.len(), left.len() + rep.len(), "unexpected cancellation");
        let joined = mid.multiply(&right);
        debug_assert_eq!(joined.len(), mid.len() + right.len(), "unexpected cancellation");
        let shift = rep.len() as i64 - (span.1 - span.0) as i64;
        (joined, shift, 0)
    }
}

/// The images of `b_h` in the monomial obtained by replacing `a_h` with
/// `a_j` (Def. 3.1): the elements of M(U_j) containing the surviving part
/// of `b_h`.  Empty when the definition says so.
pub fn image_of(
    u_h: &Word,
    a_h: &Occurrence,
    a_j: &Word,
    b_h: &Occurrence,
    p: &Params,
) -> Result<Vec<Occurrence>, ChartError> {
    if &a_h.host != u_h || &b_h.host != u_h {
        return Err(ChartError::DifferentHosts);
    }
    let m = maximal_occurrences(u_h, p);
    if !m.iter().any(|o| o.span() == a_h.span()) {
        return Err(ChartError::NotMaximal);
    }
    if b_h.span() == a_h.span() {
        // the image of a_h itself
        if a_j.is_empty() {
            return Ok(Vec::new());
        }
        let (new_word, _, _) = splice(u_h, a_h.span(), a_j);
        let mj = maximal_occurrences(&new_word, p);
        let target = (a_h.start, a_h.start + a_j.len());
        return Ok(mj
            .into_iter()
            .filter(|o| o.start <= target.0 && target.1 <= o.end)
            .collect());
    }
    let (new_word, shift, cancelled) = splice(u_h, a_h.span(), a_j);
    let surviving = surviving_span(b_h.span(), a_h.span(), shift, cancelled, u_h.len());
    let span = match surviving {
        None => return Ok(Vec::new()),
        Some(s) => s,
    };
    let mj = maximal_occurrences(&new_word, p);
    Ok(mj
        .into_iter()
        .filter(|o| o.start <= span.0 && span.1 <= o.end)
        .collect())
}

/// Where the surviving core of `b` sits after replacing `a` (positions left
/// of the replacement keep their coordinates, those right of it shift).
fn surviving_span(
    b: (usize, usize),
    a: (usize, usize),
    shift: i64,
    cancelled: usize,
    host_len: usize,
) -> Option<(usize, usize)> {
    if b.1 <= a.0 || (b.0 < a.0 && b.1 <= a.1) {
        // b lies left of a (possibly overlapping): intersect with the
        // untouched left part, shrunk by the cancellation
        let keep_end = (a.0 - cancelled).min(b.1);
        if b.0 >= keep_end {
            return None;
        }
        Some((b.0, keep_end))
    } else if b.0 >= a.1 || (b.1 > a.1 && b.0 >= a.0) {
        // b lies right of a
        let _ = host_len;
        let keep_start = b.0.max(a.1 + cancelled);
        if keep_start >= b.1 {
            return None;
        }
        let s = (keep_start as i64 + shift) as usize;
        let e = (b.1 as i64 + shift) as usize;
        Some((s, e))
    } else {
        None
    }
}

/// Virtual members of the chart of `u`:
///   * every not-fully-covered occurrence with measure ≥ τ,
///   * plus occurrences in the band [τ−2ε, τ) for which a bounded search
///     finds an admissible replacement sequence reaching τ.
pub fn virtual_members(u: &Word, p: &Params) -> Vec<Occurrence> {
    let occ = maximal_occurrences(u, p);
    virtual_members_of(u, &occ, p)
}

fn virtual_members_of(u: &Word, occ: &[Occurrence], p: &Params) -> Vec<Occurrence> {
    let (nfc_idx, _) = nfc_partition(occ);
    let tau_ys = p.tau_ys();
    let floor_ys = tau_ys.saturating_sub(2);
    let mut out = Vec::new();
    for &i in &nfc_idx {
        let o = &occ[i];
        if o.ys() >= tau_ys {
            out.push(o.clone());
        } else if o.ys() >= floor_ys && band_search(u, o.span(), p) {
            out.push(o.clone());
        }
    }
    out
}

const BAND_MAX_NODES: usize = 64;
const BAND_MAX_DEPTH: usize = 4;

/// Bounded breadth-first search over replacement sequences (Def. 3.2) that
/// tries to pump the tracked occurrence's measure up to τ.
fn band_search(u: &Word, b_span: (usize, usize), p: &Params) -> bool {
    let tau_ys = p.tau_ys();
    let floor_ys = tau_ys.saturating_sub(2);
    let mut visited: HashSet<(Word, (usize, usize))> = HashSet::new();
    let mut queue: VecDeque<(Word, (usize, usize), usize)> = VecDeque::new();
    queue.push_back((u.clone(), b_span, 0));
    visited.insert((u.clone(), b_span));
    let mut explored = 0;
    while let Some((word, span, depth)) = queue.pop_front() {
        explored += 1;
        if explored > BAND_MAX_NODES {
            return false;
        }
        let occ = maximal_occurrences(&word, p);
        let b_idx = match occ.iter().position(|o| o.span() == span) {
            Some(i) => i,
            None => continue,
        };
        if occ[b_idx].ys() >= tau_ys {
            return true;
        }
        if depth >= BAND_MAX_DEPTH {
            continue;
        }
        let (nfc_idx, _) = nfc_partition(&occ);
        if !nfc_idx.contains(&b_idx) {
            continue;
        }
        for &ai in &nfc_idx {
            let a = &occ[ai];
            if a.span() == span || a.ys() < floor_ys {
                continue;
            }
            // only replacements of occurrences bordering the tracked one can
            // change its measure
            let adjacent = a.end >= occ[b_idx].start && a.start <= occ[b_idx].end;
            if !adjacent {
                continue;
            }
            // condition (3): the essential neighbour on the side toward b
            let b_right_of_a = occ[b_idx].start > a.start;
            if essential_neighbor(&occ, &nfc_idx, ai, !b_right_of_a).is_none() {
                continue;
            }
            let a_word = a.word();
            for a_j in incident_monomials_bounded(&a.path, p, 1) {
                if a_j.is_empty() || a_j == a_word {
                    continue; // a_j = 1 always counts as covered (Lemma 3.2)
                }
                let (new_word, shift, _) = splice(&word, a.span(), &a_j);
                let new_occ = maximal_occurrences(&new_word, p);
                // legality: a_j must not be covered by images of nfc ∖ {a}
                let a_j_span = (a.start, a.start + a_j.len());
                if covered_by_images(
                    &word, &occ, &nfc_idx, ai, shift, &new_occ, a_j_span,
                ) {
                    continue;
                }
                // track the surviving part of b
                let surv = match surviving_span(span, a.span(), shift, 0, word.len()) {
                    Some(s) => s,
                    None => continue,
                };
                for img in new_occ.iter().filter(|o| o.start <= surv.0 && surv.1 <= o.end) {
                    if img.ys() < floor_ys {
                        continue;
                    }
                    let key = (new_word.clone(), img.span());
                    if visited.insert(key) {
                        queue.push_back((new_word.clone(), img.span(), depth + 1));
                    }
                }
            }
        }
    }
    false
}

/// Is `target` (a span in the new word) fully covered by the images of the
/// not-fully-covered occurrences other than `ai`?
fn covered_by_images(
    old_word: &Word,
    occ: &[Occurrence],
    nfc_idx: &[usize],
    ai: usize,
    shift: i64,
    new_occ: &[Occurrence],
    target: (usize, usize),
) -> bool {
    let a_span = occ[ai].span();
    let mut cover: Vec<(usize, usize)> = Vec::new();
    for &j in nfc_idx {
        if j == ai {
            continue;
        }
        if let Some(surv) = surviving_span(occ[j].span(), a_span, shift, 0, old_word.len()) {
            for img in new_occ.iter().filter(|o| o.start <= surv.0 && surv.1 <= o.end) {
                cover.push(img.span());
            }
        }
    }
    cover.sort_unstable();
    let mut pos = target.0;
    for (s, e) in cover {
        if s > pos {
            break;
        }
        pos = pos.max(e);
    }
    pos >= target.1
}

/// Applies several replacements of pairwise non-nested occurrences at once,
/// composing them the way consecutive single replacements would (overlapping
/// neighbours contribute the inverse of the shared piece between the two
/// replacement words).  This is the simultaneous form used by the diamond
/// property and by the tensor-choice evaluation.
pub fn apply_replacements(
    u: &Word,
    reps: &[(&Occurrence, Word)],
    _p: &Params,
) -> Result<Word, ChartError> {
    let mut sorted: Vec<&(&Occurrence, Word)> = reps.iter().collect();
    sorted.sort_by_key(|(o, _)| o.start);
    for pair in sorted.windows(2) {
        let (a, b) = (pair[0].0, pair[1].0);
        if &a.host != u || &b.host != u {
            return Err(ChartError::DifferentHosts);
        }
        if b.start <= a.start || b.end <= a.end {
            return Err(ChartError::NotOrdered);
        }
    }
    let mut parts: Vec<Word> = Vec::new();
    let mut prev_end: Option<usize> = None;
    for (o, rep) in sorted {
        match prev_end {
            None => parts.push(u.slice(0, o.start)),
            Some(e) => {
                if e <= o.start {
                    parts.push(u.slice(e, o.start));
                } else {
                    // overlapping neighbours: insert the inverse of the piece
                    parts.push(u.slice(o.start, e).invert());
                }
            }
        }
        parts.push(rep.clone());
        prev_end = Some(o.end);
    }
    parts.push(u.slice(prev_end.unwrap_or(0), u.len()));
    let refs: Vec<&Word> = parts.iter().collect();
    Ok(Word::concat(&refs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::Rational;
    use crate::gfp::parse_gfp;

    fn desk() -> Params {
        Params::desk_scale()
    }

    fn parse(s: &str, p: &Params) -> Word {
        let mut out = String::new();
        for c in s.chars() {
            match c {
                'v' => out.push_str(&p.v_word().format(&p.alphabet)),
                'V' => out.push_str(&p.v_word().invert().format(&p.alphabet)),
                'w' => out.push_str(&p.w.format(&p.alphabet)),
                'W' => out.push_str(&p.w.invert().format(&p.alphabet)),
                c => out.push(c),
            }
        }
        Word::parse(&out, &p.alphabet).unwrap()
    }

    #[test]
    fn chart_of_v_has_one_member() {
        let p = desk();
        let chart = chart_of(p.v_word(), &p);
        assert_eq!(chart.members.len(), 1);
        assert_eq!(chart.members[0].measure(&p), Rational::new(1, 1));
    }

    #[test]
    fn chart_of_w_cubed_is_empty() {
        let p = desk();
        let chart = chart_of(&p.w.pow(3), &p);
        assert!(chart.members.is_empty());
    }

    #[test]
    fn chart_of_vwv_is_one_merged_member() {
        let p = desk();
        let chart = chart_of(&parse("vwv", &p), &p);
        assert_eq!(chart.members.len(), 1);
        assert_eq!(chart.members[0].measure(&p), Rational::new(2, 1));
    }

    #[test]
    fn neighbor_relations() {
        let p = desk();
        let u = parse("vzzv", &p);
        let occ = maximal_occurrences(&u, &p);
        assert_eq!(occ.len(), 3);
        // the two big members are separated by the stray z fragment
        assert_eq!(neighbor_relation(&occ[0], &occ[2]).unwrap(), Relation::Separated);
        assert_eq!(neighbor_relation(&occ[0], &occ[1]).unwrap(), Relation::Touch);
        let u2 = parse("vzv", &p);
        let occ2 = maximal_occurrences(&u2, &p);
        assert_eq!(neighbor_relation(&occ2[0], &occ2[1]).unwrap(), Relation::Touch);
        let other_host = maximal_occurrences(&u, &p);
        assert_eq!(
            neighbor_relation(&occ2[0], &other_host[0]).unwrap_err(),
            ChartError::DifferentHosts
        );
    }

    #[test]
    fn greedy_cover_on_synthetic_intervals() {
        // middle interval inside the union of the outer two
        assert_eq!(min_interval_cover(&[(0, 10), (4, 8), (8, 20)]), 2);
        assert_eq!(min_interval_cover(&[(0, 10)]), 1);
        assert_eq!(min_interval_cover(&[(0, 6), (2, 9), (5, 12)]), 2);
    }

    #[test]
    fn cover_stats_basic_words() {
        let p = desk();
        let s = cover_stats(p.v_word(), &p);
        assert_eq!((s.n_min, s.k_tau), (1, 1));
        assert_eq!(s.nfc.len(), 1);
        assert!(s.fc.is_empty());

        let s = cover_stats(&parse("vzv", &p), &p);
        assert_eq!(s.n_min, 2);

        // w² is one measure-0 occurrence: it counts for the covering but
        // never for the virtual chart
        let s = cover_stats(&p.w.pow(2), &p);
        assert_eq!((s.n_min, s.k_tau), (1, 0));
    }

    #[test]
    fn f_char_examples() {
        let p = desk();
        assert_eq!(f_char(p.v_word(), &p), FChar { n: 1, k: 1 });
        assert_eq!(f_char(&p.w.pow(2), &p), FChar { n: 1, k: 0 });
        assert_eq!(f_char(&parse("vzv", &p), &p), FChar { n: 2, k: 2 });
        assert!(FChar { n: 1, k: 5 } < FChar { n: 2, k: 0 });
        assert!(FChar { n: 2, k: 1 } < FChar { n: 2, k: 3 });
    }

    #[test]
    fn virtual_members_include_chart_and_exclude_deep_subthreshold() {
        let p = desk();
        let u = parse("vzv", &p);
        let virt = virtual_members(&u, &p);
        assert_eq!(virt.len(), 2);

        // a fragment with 5 y's sits below τ−2ε and can never become virtual
        let v = p.v_word();
        let small = v.slice(0, p.v().y_positions()[4] + 1);
        let u = parse("z", &p).multiply(&small).multiply(&parse("z", &p));
        let virt = virtual_members(&u, &p);
        assert!(virt.is_empty());
    }

    #[test]
    fn image_of_separated_member_is_unchanged() {
        let p = desk();
        let u = parse("vzv", &p);
        let occ = maximal_occurrences(&u, &p);
        let a_h = &occ[1];
        let b_h = &occ[0];
        // replace the right v by v·w (incident under any bound)
        let a_j = p.v_word().multiply(&p.w);
        let images = image_of(&u, a_h, &a_j, b_h, &p).unwrap();
        assert_eq!(images.len(), 1);
        assert_eq!(images[0].span(), b_h.span());
    }

    #[test]
    fn image_of_identity_replacement_is_identity() {
        let p = desk();
        let u = parse("vzv", &p);
        let occ = maximal_occurrences(&u, &p);
        let images = image_of(&u, &occ[0], &occ[0].word(), &occ[1], &p).unwrap();
        assert_eq!(images.len(), 1);
        assert_eq!(images[0].span(), occ[1].span());
    }

    #[test]
    fn image_vanishes_under_full_cancellation() {
        let p = desk();
        // a_h = the v member of z·v·z; a_j = 1 kills the member entirely
        let u = parse("zvz", &p);
        let occ = maximal_occurrences(&u, &p);
        let member = occ
            .iter()
            .find(|o| o.ys() == 100)
            .expect("the v member exists");
        let images = image_of(&u, member, &Word::identity(), member, &p).unwrap();
        assert!(images.is_empty());
    }

    #[test]
    fn apply_replacements_handles_separated_and_touching() {
        let p = desk();
        let u = parse("vzv", &p);
        let occ = maximal_occurrences(&u, &p);
        // occ[0] is v·z (v prolonged into the w-arc), occ[1] the trailing v
        let vw = p.v_word().multiply(&p.w);
        let reps = vec![(&occ[0], occ[0].word()), (&occ[1], vw.clone())];
        let got = apply_replacements(&u, &reps, &p).unwrap();
        assert_eq!(got, parse("vzvw", &p));
    }
}
