//! Generalized fractional powers: the v-diagram path model, the Λ-measure,
//! recognition of GFP words, and enumeration of maximal occurrences.
//!
//! A generalized fractional power is any subword of a monomial over the fixed
//! pair (v, w).  Operationally it is an oriented path in the v-diagram: a
//! partial arc at the start, a sequence of whole-arc traversals, and a partial
//! arc at the end.  The recognizer scans a word against the four periodic
//! patterns v, v⁻¹, w^∞ and w^{−∞}, localizing v-material through the
//! y-position anchors (any fragment with ≥ 2 letters y has a unique phase),
//! and stitches arc fragments into paths at the junction point O.
//!
//! M(U) keeps every maximal occurrence regardless of measure, including the
//! measure-zero w- and x-fragments.  The covering number N(U) is only
//! monotone under replacements when measure-zero images are counted — an
//! occurrence with a single y can survive a neighbour's replacement as pure
//! arc material — so suppressing them would break the f-characteristic
//! bookkeeping.  Charts filter by τ on top of this set as usual.

use crate::construction::{Params, Rational};
use crate::freegroup::{Alphabet, Letter, Word};
use serde_json::{json, Value};
use thiserror::Error;

/// The four periodic patterns an arc fragment can match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcKind {
    VPlus,
    VMinus,
    WPlus,
    WMinus,
}

impl ArcKind {
    pub fn is_v(self) -> bool {
        matches!(self, ArcKind::VPlus | ArcKind::VMinus)
    }

    pub fn sign(self) -> i8 {
        match self {
            ArcKind::VPlus | ArcKind::WPlus => 1,
            ArcKind::VMinus | ArcKind::WMinus => -1,
        }
    }

    pub fn period(self, p: &Params) -> usize {
        if self.is_v() {
            p.v().len()
        } else {
            p.w.len()
        }
    }
}

/// Letter at `phase` of the periodic pattern for an arc kind.
fn pattern_letter(kind: ArcKind, phase: usize, p: &Params) -> Letter {
    match kind {
        ArcKind::VPlus => p.v_word().letter(phase),
        ArcKind::VMinus => p.v_word().letter(p.v().len() - 1 - phase).inv(),
        ArcKind::WPlus => p.w.letter(phase),
        ArcKind::WMinus => p.w.letter(p.w.len() - 1 - phase).inv(),
    }
}

/// A factor of one periodic pattern: `len` letters starting at pattern
/// offset `phase`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fragment {
    pub kind: ArcKind,
    pub phase: usize,
    pub len: usize,
}

impl Fragment {
    pub fn word(&self, p: &Params) -> Word {
        let period = self.kind.period(p);
        let letters = (0..self.len)
            .map(|i| pattern_letter(self.kind, (self.phase + i) % period, p))
            .collect();
        Word::from_letters(letters)
    }

    /// Number of y letters covered by the fragment.
    pub fn ys(&self, p: &Params) -> usize {
        if !self.kind.is_v() {
            // Λ of any subword of w is zero by definition.
            return 0;
        }
        let period = p.v().len();
        let total = p.v().y_count();
        let fulls = self.len / period;
        let rem = self.len % period;
        let mut count = fulls * total;
        let a = self.phase % period;
        let window = |lo: usize, hi: usize| match self.kind {
            ArcKind::VPlus => p.v().ys_in(lo, hi),
            // window of v⁻¹ mirrors to a window of v
            ArcKind::VMinus => p.v().ys_in(period - hi, period - lo),
            _ => unreachable!(),
        };
        if rem > 0 {
            if a + rem <= period {
                count += window(a, a + rem);
            } else {
                count += window(a, period) + window(0, a + rem - period);
            }
        }
        count
    }

    /// Largest y-count of a sub-factor lying within a single pattern period.
    /// This is what λ-forbiddenness is measured against.
    pub fn max_single_period_ys(&self, p: &Params) -> usize {
        if !self.kind.is_v() {
            return 0;
        }
        let period = p.v().len();
        if self.len >= period {
            return p.v().y_count();
        }
        let a = self.phase % period;
        let window = |lo: usize, hi: usize| match self.kind {
            ArcKind::VPlus => p.v().ys_in(lo, hi),
            ArcKind::VMinus => p.v().ys_in(period - hi, period - lo),
            _ => unreachable!(),
        };
        if a + self.len <= period {
            window(a, a + self.len)
        } else {
            window(a, period).max(window(0, a + self.len - period))
        }
    }
}

/// One whole-arc traversal in the spine of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpineStep {
    /// One traversal of the v-arc, forward (+1) or backward (−1).
    V(i8),
    /// One traversal of the w^k arc, k ≠ 0.
    W(i64),
}

impl SpineStep {
    pub fn word(&self, p: &Params) -> Word {
        match *self {
            SpineStep::V(e) => {
                if e > 0 {
                    p.v_word().clone()
                } else {
                    p.v_word().invert()
                }
            }
            SpineStep::W(k) => p.w.pow(k),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("fragment has zero length")]
    EmptyFragment,
    #[error("prefix fragment must end at the point O when followed by more arcs")]
    PrefixNotAtO,
    #[error("suffix fragment must start at the point O")]
    SuffixNotAtO,
    #[error("fragment length must stay below one full period")]
    FragmentTooLong,
    #[error("spine step w^0 is not an arc")]
    ZeroWPower,
    #[error("adjacent arcs cancel; the assembled word would not be reduced")]
    CancellingArcs,
}

/// Where a path endpoint sits in the v-diagram.  `O` is `V { offset: 0 }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathPoint {
    V { offset: usize },
    W { k: i64, offset: usize },
}

impl PathPoint {
    pub fn origin() -> Self {
        PathPoint::V { offset: 0 }
    }

    pub fn on_v_arc(&self) -> bool {
        matches!(self, PathPoint::V { .. })
    }

    pub fn to_json(&self) -> Value {
        match *self {
            PathPoint::V { offset } => json!({ "arc": "v", "offset": offset }),
            PathPoint::W { k, offset } => json!({ "arc": ["w", k], "offset": offset }),
        }
    }
}

/// Which arcs host the initial and final points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathType {
    VV,
    VW,
    WV,
    WW,
}

/// A generalized fractional power as a path in the v-diagram.
///
/// Canonical form: partial arcs only at the two ends (sub-period, whole
/// periods absorbed into the spine), except that a path staying strictly
/// inside one arc is stored as a lone prefix fragment of any phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GfpPath {
    prefix: Option<Fragment>,
    spine: Vec<SpineStep>,
    suffix: Option<Fragment>,
}

impl GfpPath {
    /// The empty path at O: the identity monomial as a GFP.
    pub fn trivial() -> Self {
        GfpPath::default()
    }

    pub fn new(
        prefix: Option<Fragment>,
        spine: Vec<SpineStep>,
        suffix: Option<Fragment>,
        p: &Params,
    ) -> Result<Self, PathError> {
        let path = GfpPath { prefix, spine, suffix };
        path.validate(p)?;
        Ok(path)
    }

    pub fn prefix(&self) -> Option<&Fragment> {
        self.prefix.as_ref()
    }

    pub fn suffix(&self) -> Option<&Fragment> {
        self.suffix.as_ref()
    }

    pub fn spine(&self) -> &[SpineStep] {
        &self.spine
    }

    pub fn is_trivial(&self) -> bool {
        self.prefix.is_none() && self.spine.is_empty() && self.suffix.is_none()
    }

    fn validate(&self, p: &Params) -> Result<(), PathError> {
        let inner_only = self.spine.is_empty() && self.suffix.is_none();
        if let Some(f) = &self.prefix {
            let period = f.kind.period(p);
            if f.len == 0 {
                return Err(PathError::EmptyFragment);
            }
            if inner_only {
                if f.phase + f.len > period && f.kind.is_v() {
                    // inner v-fragments stay inside one traversal; w-material
                    // may wrap (a factor of w^k spans several periods)
                    return Err(PathError::FragmentTooLong);
                }
            } else {
                if f.len >= period || (f.phase + f.len) % period != 0 {
                    return Err(PathError::PrefixNotAtO);
                }
            }
        }
        if let Some(f) = &self.suffix {
            if f.len == 0 {
                return Err(PathError::EmptyFragment);
            }
            if f.phase != 0 || f.len >= f.kind.period(p) {
                return Err(PathError::SuffixNotAtO);
            }
        }
        // junction compatibility along the whole path
        let mut last_exit: Option<ArcKind> = self.prefix.map(|f| f.kind);
        for step in &self.spine {
            let kind = match *step {
                SpineStep::V(e) => {
                    if e > 0 {
                        ArcKind::VPlus
                    } else {
                        ArcKind::VMinus
                    }
                }
                SpineStep::W(k) => {
                    if k == 0 {
                        return Err(PathError::ZeroWPower);
                    }
                    if k > 0 {
                        ArcKind::WPlus
                    } else {
                        ArcKind::WMinus
                    }
                }
            };
            if let Some(prev) = last_exit {
                check_junction(prev, kind)?;
            }
            last_exit = Some(kind);
        }
        if let Some(f) = &self.suffix {
            if let Some(prev) = last_exit {
                check_junction(prev, f.kind)?;
            }
        }
        Ok(())
    }

    pub fn assemble(&self, p: &Params) -> Word {
        let mut acc = match &self.prefix {
            Some(f) => f.word(p),
            None => Word::identity(),
        };
        for step in &self.spine {
            acc = acc.multiply(&step.word(p));
        }
        if let Some(f) = &self.suffix {
            acc = acc.multiply(&f.word(p));
        }
        acc
    }

    /// Total y-count of the path (prefix + full v-arcs + suffix).
    pub fn ys(&self, p: &Params) -> usize {
        let mut count = 0;
        if let Some(f) = &self.prefix {
            count += f.ys(p);
        }
        if let Some(f) = &self.suffix {
            count += f.ys(p);
        }
        for step in &self.spine {
            if let SpineStep::V(_) = step {
                count += p.v().y_count();
            }
        }
        count
    }

    /// The Λ-measure: y-count over β−α; w-arcs contribute nothing.
    pub fn lambda_measure(&self, p: &Params) -> Rational {
        p.measure(self.ys(p))
    }

    /// Sum of the v-exponents along the spine.
    pub fn v_exponent_sum(&self) -> i64 {
        self.spine
            .iter()
            .map(|s| match *s {
                SpineStep::V(e) => e as i64,
                _ => 0,
            })
            .sum()
    }

    /// Sum of the w-exponents along the spine.
    pub fn w_exponent_sum(&self) -> i64 {
        self.spine
            .iter()
            .map(|s| match *s {
                SpineStep::W(k) => k,
                _ => 0,
            })
            .sum()
    }

    pub fn start(&self, p: &Params) -> PathPoint {
        match &self.prefix {
            None => PathPoint::origin(),
            Some(f) => {
                let period = f.kind.period(p);
                match f.kind {
                    ArcKind::VPlus => PathPoint::V { offset: f.phase },
                    ArcKind::VMinus => PathPoint::V { offset: (period - f.phase) % period },
                    // boundary w-points are reported on the w^{±1} arc
                    ArcKind::WPlus => {
                        PathPoint::W { k: self.w_arc_index(f, p), offset: f.phase % p.w.len() }
                    }
                    ArcKind::WMinus => {
                        PathPoint::W { k: -self.w_arc_index(f, p), offset: f.phase % p.w.len() }
                    }
                }
            }
        }
    }

    pub fn end(&self, p: &Params) -> PathPoint {
        let last = match (&self.suffix, self.prefix) {
            (Some(f), _) => Some((f.kind, f.phase + f.len)),
            (None, Some(f)) if self.spine.is_empty() => Some((f.kind, f.phase + f.len)),
            _ => None,
        };
        match last {
            None => PathPoint::origin(),
            Some((kind, end_phase)) => {
                let period = kind.period(p);
                let off = end_phase % period;
                if off == 0 {
                    return PathPoint::origin();
                }
                match kind {
                    ArcKind::VPlus => PathPoint::V { offset: off },
                    ArcKind::VMinus => PathPoint::V { offset: period - off },
                    ArcKind::WPlus => {
                        let k = (end_phase + p.w.len() - 1) / p.w.len();
                        PathPoint::W { k: k as i64, offset: off % p.w.len() }
                    }
                    ArcKind::WMinus => {
                        let k = (end_phase + p.w.len() - 1) / p.w.len();
                        PathPoint::W { k: -(k as i64), offset: off % p.w.len() }
                    }
                }
            }
        }
    }

    /// Arc index for an inner w-fragment: the smallest |k| whose arc fits it.
    fn w_arc_index(&self, f: &Fragment, p: &Params) -> i64 {
        if self.spine.is_empty() && self.suffix.is_none() {
            ((f.phase + f.len + p.w.len() - 1) / p.w.len()).max(1) as i64
        } else {
            1
        }
    }

    pub fn classify(&self, p: &Params) -> PathType {
        match (self.start(p).on_v_arc(), self.end(p).on_v_arc()) {
            (true, true) => PathType::VV,
            (true, false) => PathType::VW,
            (false, true) => PathType::WV,
            (false, false) => PathType::WW,
        }
    }

    pub fn prefix_word(&self, p: &Params) -> Word {
        self.prefix.map(|f| f.word(p)).unwrap_or_default()
    }

    pub fn suffix_word(&self, p: &Params) -> Word {
        self.suffix.map(|f| f.word(p)).unwrap_or_default()
    }

    pub fn to_json(&self, p: &Params) -> Value {
        let spine: Vec<Value> = self
            .spine
            .iter()
            .map(|s| match *s {
                SpineStep::V(e) => json!(["v", e]),
                SpineStep::W(k) => json!(["w", k]),
            })
            .collect();
        json!({
            "start": self.start(p).to_json(),
            "end": self.end(p).to_json(),
            "spine": spine,
            "prefix": self.prefix_word(p).format(&p.alphabet),
            "suffix": self.suffix_word(p).format(&p.alphabet),
        })
    }
}

fn check_junction(prev: ArcKind, next: ArcKind) -> Result<(), PathError> {
    use ArcKind::*;
    let cancels = matches!(
        (prev, next),
        (VPlus, VMinus) | (VMinus, VPlus) | (WPlus, WMinus) | (WMinus, WPlus)
    );
    if cancels {
        Err(PathError::CancellingArcs)
    } else {
        Ok(())
    }
}

/// A GFP located inside a host word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub host: Word,
    pub start: usize,
    pub end: usize,
    pub path: GfpPath,
    ys: usize,
}

impl Occurrence {
    pub fn word(&self) -> Word {
        self.host.slice(self.start, self.end)
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn ys(&self) -> usize {
        self.ys
    }

    pub fn measure(&self, p: &Params) -> Rational {
        p.measure(self.ys)
    }

    pub fn span(&self) -> (usize, usize) {
        (self.start, self.end)
    }

    /// True iff the two occurrences share at least one letter position.
    pub fn overlaps(&self, other: &Occurrence) -> bool {
        self.start < other.end && other.start < self.end
    }
}

// ---------------------------------------------------------------------------
// scanner
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct RawFrag {
    kind: ArcKind,
    start: usize,
    end: usize,
    /// pattern offset of the letter at `start`
    phase: usize,
}

impl RawFrag {
    fn len(&self) -> usize {
        self.end - self.start
    }

    fn starts_at_o(&self, p: &Params) -> bool {
        self.phase % self.kind.period(p) == 0
    }

    fn ends_at_o(&self, p: &Params) -> bool {
        (self.phase + self.len()) % self.kind.period(p) == 0
    }
}

/// All maximal w-pattern fragments: for each diagonal alignment, the maximal
/// runs of positions matching the periodic pattern.
fn scan_w(u: &Word, kind: ArcKind, p: &Params) -> Vec<RawFrag> {
    let m = p.w.len();
    let n = u.len();
    let mut out = Vec::new();
    for d in 0..m {
        let mut i = 0;
        while i < n {
            if u.letter(i) == pattern_letter(kind, (i + d) % m, p) {
                let a = i;
                while i < n && u.letter(i) == pattern_letter(kind, (i + d) % m, p) {
                    i += 1;
                }
                out.push(RawFrag { kind, start: a, end: i, phase: (a + d) % m });
            } else {
                i += 1;
            }
        }
    }
    out
}

/// Maximal factors of v^∞ inside a stretch of positive x/y letters.
///
/// `ys` are letter indices of the y's in the stretch (host coordinates),
/// `stretch` is the host range of the stretch itself.
fn scan_v_stretch(
    p: &Params,
    stretch: (usize, usize),
    ys: &[usize],
    out: &mut Vec<(usize, usize, usize)>,
) {
    let alpha = p.alpha;
    let beta = p.beta;
    let v = p.v();
    let (s_lo, s_hi) = stretch;
    if ys.is_empty() {
        return; // pure x-runs carry measure 0 and never stitch
    }
    let m = ys.len();
    // x-run lengths: before first y, between y's, after last y
    let head_run = ys[0] - s_lo;
    let tail_run = s_hi - (ys[m - 1] + 1);
    let gap = |t: usize| ys[t + 1] - ys[t] - 1; // between y_t and y_{t+1}
    let prev_run = |c: i64| if c == alpha { beta - 1 } else { c - 1 };
    let avail_h = |t: usize| if t == 0 { head_run } else { gap(t - 1) };
    let avail_t = |t: usize| if t + 1 == m { tail_run } else { gap(t) };
    // v-offset of the y whose run value is c
    let y_off = |c: i64| v.run_start(c).unwrap() + c as usize;

    // chains of >= 2 y's: interior gaps are full runs with consecutive values
    let pair_ok = |t: usize| {
        let g = gap(t) as i64;
        g >= alpha && g < beta
    };
    let chain_link = |t: usize| {
        // y_t..y_{t+2} consistent: run after y_{t+1} continues the progression
        pair_ok(t) && pair_ok(t + 1) && gap(t + 1) as i64 == v.next_run(gap(t) as i64)
    };
    let mut i = 0;
    while i + 1 < m {
        if !pair_ok(i) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j + 1 < m && chain_link(j - 1) {
            j += 1;
        }
        // chain y_i ..= y_j with pinned run values
        let c_first = prev_run(gap(i) as i64);
        let mut c_last = gap(i) as i64;
        for t in (i + 1)..j {
            debug_assert_eq!(gap(t) as i64, v.next_run(c_last));
            c_last = gap(t) as i64;
        }
        let head = avail_h(i).min(c_first as usize);
        let tail = avail_t(j).min(v.next_run(c_last) as usize);
        let start = ys[i] - head;
        let end = ys[j] + 1 + tail;
        let phase = y_off(c_first) - head;
        out.push((start, end, phase));
        i = j;
    }

    // single-y windows: Pareto-maximal (head, tail) over the run value c,
    // plus the two boundary-aligned variants that enable stitching at O
    for t in 0..m {
        let ah = avail_h(t);
        let at = avail_t(t);
        let mut cands: Vec<(usize, usize, i64)> = Vec::new();
        for c in alpha..beta {
            let head = ah.min(c as usize);
            let tail = at.min(v.next_run(c) as usize);
            cands.push((head, tail, c));
        }
        let mut keep: Vec<(usize, usize, i64)> = Vec::new();
        for &(h, tl, c) in &cands {
            let dominated = cands
                .iter()
                .any(|&(h2, t2, _)| (h2 > h && t2 >= tl) || (h2 >= h && t2 > tl));
            // ties keep the smallest run value: leftmost position in v
            if !dominated && !keep.iter().any(|&(h2, t2, _)| h2 == h && t2 == tl) {
                keep.push((h, tl, c));
            }
        }
        // forced variants: start exactly at O / end exactly at O
        if t == 0 && head_run == alpha as usize {
            keep.push((alpha as usize, at.min(v.next_run(alpha) as usize), alpha));
        }
        if at == 0 {
            keep.push((ah.min((beta - 1) as usize), 0, beta - 1));
        }
        for (h, tl, c) in keep {
            let start = ys[t] - h;
            let end = ys[t] + 1 + tl;
            let phase = y_off(c) - h;
            out.push((start, end, phase));
        }
    }
    out.sort_unstable();
    out.dedup();
}

/// Maximal pure-x factors of v^∞ inside an x-run of the given length:
/// the whole run when it fits a single x-run of v, otherwise every window
/// of the longest run length.
fn pure_x_fragments(
    p: &Params,
    run: (usize, usize),
    out: &mut Vec<(usize, usize, usize)>,
) {
    let (lo, hi) = run;
    let len = (hi - lo) as i64;
    let longest = p.beta - 1;
    if len <= longest {
        let phase = if len <= p.alpha {
            0
        } else {
            p.v().run_start(len).unwrap()
        };
        out.push((lo, hi, phase));
    } else {
        let phase = p.v().run_start(longest).unwrap();
        for start in lo..=(hi - longest as usize) {
            out.push((start, start + longest as usize, phase));
        }
    }
}

/// All pattern fragments of all four kinds.
fn scan_fragments(u: &Word, p: &Params) -> Vec<RawFrag> {
    let mut out = Vec::new();
    out.extend(scan_w(u, ArcKind::WPlus, p));
    out.extend(scan_w(u, ArcKind::WMinus, p));

    let period = p.v().len();
    // v⁺ material: stretches of positive x/y letters
    let is_vplus = |l: Letter| !l.inverse && (l.gen == Alphabet::X || l.gen == Alphabet::Y);
    let is_vminus = |l: Letter| l.inverse && (l.gen == Alphabet::X || l.gen == Alphabet::Y);

    let mut scan_v_kind = |positive: bool| {
        let n = u.len();
        let test: &dyn Fn(Letter) -> bool = if positive { &is_vplus } else { &is_vminus };
        let mut i = 0;
        while i < n {
            if !test(u.letter(i)) {
                i += 1;
                continue;
            }
            let a = i;
            while i < n && test(u.letter(i)) {
                i += 1;
            }
            let (lo, hi) = (a, i);
            // y-positions within the stretch, split at double-y boundaries
            // (handled naturally: zero-length gaps never form valid runs)
            let mut raw = Vec::new();
            if positive {
                let ys: Vec<usize> =
                    (lo..hi).filter(|&k| u.letter(k).gen == Alphabet::Y).collect();
                scan_v_stretch(p, (lo, hi), &ys, &mut raw);
                // pure-x material between the y's
                let mut run_lo = lo;
                for &y in &ys {
                    if y > run_lo {
                        pure_x_fragments(p, (run_lo, y), &mut raw);
                    }
                    run_lo = y + 1;
                }
                if hi > run_lo {
                    pure_x_fragments(p, (run_lo, hi), &mut raw);
                }
                for (start, end, phase) in raw {
                    out.push(RawFrag { kind: ArcKind::VPlus, start, end, phase });
                }
            } else {
                // scan the mirror image as v⁺ material and map back
                let inv: Vec<Letter> = (lo..hi).rev().map(|k| u.letter(k).inv()).collect();
                let inv_word = Word::from_letters(inv);
                debug_assert_eq!(inv_word.len(), hi - lo);
                let ys: Vec<usize> = (0..inv_word.len())
                    .filter(|&k| inv_word.letter(k).gen == Alphabet::Y)
                    .collect();
                scan_v_stretch(p, (0, inv_word.len()), &ys, &mut raw);
                let mut run_lo = 0;
                for &y in &ys {
                    if y > run_lo {
                        pure_x_fragments(p, (run_lo, y), &mut raw);
                    }
                    run_lo = y + 1;
                }
                if inv_word.len() > run_lo {
                    pure_x_fragments(p, (run_lo, inv_word.len()), &mut raw);
                }
                for (s2, e2, q) in raw {
                    let len = e2 - s2;
                    let start = lo + (hi - lo) - e2;
                    let end = start + len;
                    // v⁻¹-pattern offset of the mapped fragment start
                    let phase = (2 * period - (q + len) % period) % period;
                    out.push(RawFrag { kind: ArcKind::VMinus, start, end, phase });
                }
            }
        }
    };
    scan_v_kind(true);
    scan_v_kind(false);
    out.sort_unstable_by_key(|f| (f.start, f.end, f.kind, f.phase));
    out.dedup();
    out
}

/// Builds the canonical path for a chain of stitched fragments.
fn path_from_chain(chain: &[RawFrag], p: &Params) -> GfpPath {
    let mut prefix = None;
    let mut spine: Vec<SpineStep> = Vec::new();
    let mut suffix = None;
    let push_fulls = |spine: &mut Vec<SpineStep>, kind: ArcKind, fulls: usize| {
        if fulls == 0 {
            return;
        }
        match kind {
            ArcKind::VPlus => spine.extend(std::iter::repeat(SpineStep::V(1)).take(fulls)),
            ArcKind::VMinus => spine.extend(std::iter::repeat(SpineStep::V(-1)).take(fulls)),
            ArcKind::WPlus => spine.push(SpineStep::W(fulls as i64)),
            ArcKind::WMinus => spine.push(SpineStep::W(-(fulls as i64))),
        }
    };
    let single = chain.len() == 1;
    for (idx, f) in chain.iter().enumerate() {
        let period = f.kind.period(p);
        let len = f.len();
        let first = idx == 0;
        let last = idx + 1 == chain.len();
        if single {
            if f.phase + len <= period && f.phase != 0 {
                prefix = Some(Fragment { kind: f.kind, phase: f.phase, len });
            } else if f.phase == 0 {
                let fulls = len / period;
                push_fulls(&mut spine, f.kind, fulls);
                let rem = len % period;
                if rem > 0 {
                    suffix = Some(Fragment { kind: f.kind, phase: 0, len: rem });
                }
            } else {
                // starts mid-arc and passes O
                let head = period - f.phase;
                prefix = Some(Fragment { kind: f.kind, phase: f.phase, len: head });
                let rest = len - head;
                push_fulls(&mut spine, f.kind, rest / period);
                if rest % period > 0 {
                    suffix = Some(Fragment { kind: f.kind, phase: 0, len: rest % period });
                }
            }
        } else if first {
            // ends at O by the stitching condition
            if f.phase != 0 {
                let head = period - f.phase;
                prefix = Some(Fragment { kind: f.kind, phase: f.phase, len: head });
                push_fulls(&mut spine, f.kind, (len - head) / period);
            } else {
                push_fulls(&mut spine, f.kind, len / period);
            }
        } else if last {
            // starts at O
            let fulls = len / period;
            push_fulls(&mut spine, f.kind, fulls);
            let rem = len % period;
            if rem > 0 {
                suffix = Some(Fragment { kind: f.kind, phase: 0, len: rem });
            }
        } else {
            debug_assert_eq!(len % period, 0);
            push_fulls(&mut spine, f.kind, len / period);
        }
    }
    GfpPath { prefix, spine, suffix }
}

/// Every maximal occurrence of a generalized fractional power in `u` that is
/// not properly contained in another occurrence, measure-zero fragments
/// included.  Sorted by start position.
pub fn maximal_occurrences(u: &Word, p: &Params) -> Vec<Occurrence> {
    let frags = scan_fragments(u, p);
    let n_frags = frags.len();
    // stitching: fragment ending at O links to the fragment starting at O
    // at the same host position (at most one each; same-kind links cannot
    // happen because maximal fragments of one diagonal never abut)
    let mut next: Vec<Option<usize>> = vec![None; n_frags];
    let mut has_prev: Vec<bool> = vec![false; n_frags];
    let mut o_starts: std::collections::HashMap<usize, Vec<usize>> =
        std::collections::HashMap::new();
    for (j, g) in frags.iter().enumerate() {
        if g.starts_at_o(p) {
            o_starts.entry(g.start).or_default().push(j);
        }
    }
    for (i, f) in frags.iter().enumerate() {
        if !f.ends_at_o(p) {
            continue;
        }
        if let Some(js) = o_starts.get(&f.end) {
            // several same-kind candidates are prefixes of one diagonal:
            // continue along the longest; none of them can start a chain
            let mut best: Option<usize> = None;
            for &j in js {
                if frags[j].kind != f.kind {
                    debug_assert!(check_junction(f.kind, frags[j].kind).is_ok());
                    has_prev[j] = true;
                    best = match best {
                        None => Some(j),
                        Some(b) if frags[j].end > frags[b].end => Some(j),
                        keep => keep,
                    };
                }
            }
            next[i] = best;
        }
    }
    let mut occurrences: Vec<Occurrence> = Vec::new();
    for root in 0..n_frags {
        if has_prev[root] {
            continue;
        }
        let mut chain = vec![frags[root]];
        let mut cur = root;
        while let Some(nx) = next[cur] {
            chain.push(frags[nx]);
            cur = nx;
        }
        let path = path_from_chain(&chain, p);
        let ys = path.ys(p);
        let start = chain[0].start;
        let end = chain.last().unwrap().end;
        debug_assert_eq!(
            path.assemble(p),
            u.slice(start, end),
            "assembled path must equal the host subword"
        );
        occurrences.push(Occurrence { host: u.clone(), start, end, path, ys });
    }
    // drop occurrences properly contained in others; dedup equal spans
    occurrences.sort_by_key(|o| (o.start, std::cmp::Reverse(o.end)));
    let mut kept: Vec<Occurrence> = Vec::new();
    for o in occurrences {
        if kept
            .iter()
            .any(|k| k.start <= o.start && o.end <= k.end && (k.start, k.end) != (o.start, o.end))
        {
            continue;
        }
        if kept.iter().any(|k| (k.start, k.end) == (o.start, o.end)) {
            continue; // same occurrence, alternative phase bookkeeping
        }
        kept.push(o);
    }
    kept.sort_by_key(|o| (o.start, o.end));
    kept
}

/// Recognizes a whole word as a single generalized fractional power.
///
/// Returns the canonical path (leftmost-in-v tie-break for fragments whose
/// phase is ambiguous), or `None` when the word is not a subword of any
/// monomial over (v, w).
pub fn parse_gfp(u: &Word, p: &Params) -> Option<GfpPath> {
    if u.is_empty() {
        return Some(GfpPath::trivial());
    }
    // pure x-run special case: measure 0, many alignments, canonical leftmost
    let all_x = |inverse: bool| {
        u.letters().iter().all(|l| l.gen == Alphabet::X && l.inverse == inverse)
    };
    if all_x(false) || all_x(true) {
        let a = u.len() as i64;
        if a > p.beta - 1 {
            return None;
        }
        let kind = if all_x(false) { ArcKind::VPlus } else { ArcKind::VMinus };
        let phase = match kind {
            ArcKind::VPlus => {
                if a <= p.alpha {
                    0
                } else {
                    p.v().run_start(a).unwrap()
                }
            }
            // v⁻¹ starts y⁻¹ then the longest run; leftmost fit is offset 1
            _ => 1,
        };
        let frag = Fragment { kind, phase, len: u.len() };
        return if phase == 0 {
            Some(GfpPath { prefix: None, spine: Vec::new(), suffix: Some(frag) })
        } else {
            Some(GfpPath { prefix: Some(frag), spine: Vec::new(), suffix: None })
        };
    }
    let frags = scan_fragments(u, p);
    // chains that span the entire word
    let full: Vec<GfpPath> = chains_spanning(&frags, u.len(), p);
    full.into_iter().next()
}

fn chains_spanning(frags: &[RawFrag], n: usize, p: &Params) -> Vec<GfpPath> {
    let mut out = Vec::new();
    let mut starts: Vec<&RawFrag> = frags.iter().filter(|f| f.start == 0).collect();
    starts.sort_by_key(|f| (f.kind, f.phase));
    for f0 in starts {
        let mut chain = vec![*f0];
        loop {
            let last = chain.last().unwrap();
            if last.end == n {
                out.push(path_from_chain(&chain, p));
                break;
            }
            if !last.ends_at_o(p) {
                break;
            }
            let nx = frags
                .iter()
                .filter(|g| g.start == last.end && g.starts_at_o(p) && g.kind != last.kind)
                .max_by_key(|g| g.end);
            match nx {
                Some(g) => chain.push(*g),
                None => break,
            }
        }
    }
    out
}

/// Positive-frame decomposition: frame words (left, right) that are genuine
/// final/initial fragments of v^{±1} or w^{±1} with no v⁻¹ material, plus
/// the factor list (is_v, exponent) of the middle monomial M, so that the
/// path's word equals left · M(v, w) · right after free reduction.  Inverse
/// v-fragments are re-expressed through a whole v⁻¹ factor; paths living
/// strictly inside one arc use suffix · arc⁻¹ · prefix.
pub(crate) fn frame_decomposition(
    path: &GfpPath,
    p: &Params,
) -> (Word, Word, Vec<(bool, i64)>) {
    let v = p.v_word();
    let vlen = v.len();
    let wlen = p.w.len();
    let winv = p.w.invert();
    let mut factors: Vec<(bool, i64)> = Vec::new();

    if path.spine().is_empty() && path.suffix().is_none() {
        if let Some(f) = path.prefix() {
            let period = f.kind.period(p);
            let pattern = match f.kind {
                ArcKind::VPlus => v.clone(),
                ArcKind::VMinus => v.invert(),
                ArcKind::WPlus => p.w.clone(),
                ArcKind::WMinus => winv.clone(),
            };
            if f.phase == 0 {
                return (Word::identity(), pattern.slice(0, f.len), Vec::new());
            }
            if f.phase + f.len == period {
                return (pattern.slice(f.phase, period), Word::identity(), Vec::new());
            }
            return match f.kind {
                ArcKind::VPlus => (
                    v.slice(f.phase, vlen),
                    v.slice(0, f.phase + f.len),
                    vec![(true, -1)],
                ),
                ArcKind::VMinus => (
                    v.slice(vlen - f.phase, vlen),
                    v.slice(0, vlen - f.phase - f.len),
                    vec![(true, -1)],
                ),
                ArcKind::WPlus => {
                    if f.phase + f.len < wlen {
                        (
                            p.w.slice(f.phase, wlen),
                            p.w.slice(0, f.phase + f.len),
                            vec![(false, -1)],
                        )
                    } else {
                        let head = wlen - f.phase;
                        let fulls = ((f.len - head) / wlen) as i64;
                        let rem = (f.len - head) % wlen;
                        let fs = if fulls == 0 { Vec::new() } else { vec![(false, fulls)] };
                        (p.w.slice(f.phase, wlen), p.w.slice(0, rem), fs)
                    }
                }
                ArcKind::WMinus => {
                    if f.phase + f.len < wlen {
                        (
                            winv.slice(f.phase, wlen),
                            winv.slice(0, f.phase + f.len),
                            vec![(false, 1)],
                        )
                    } else {
                        let head = wlen - f.phase;
                        let fulls = ((f.len - head) / wlen) as i64;
                        let rem = (f.len - head) % wlen;
                        let fs = if fulls == 0 { Vec::new() } else { vec![(false, -fulls)] };
                        (winv.slice(f.phase, wlen), winv.slice(0, rem), fs)
                    }
                }
            };
        }
        return (Word::identity(), Word::identity(), Vec::new());
    }

    let left = match path.prefix() {
        None => Word::identity(),
        Some(f) => match f.kind {
            ArcKind::VPlus => v.slice(f.phase, vlen),
            ArcKind::VMinus => {
                // suffix of v⁻¹ of length d equals v[d..] · v⁻¹
                factors.push((true, -1));
                v.slice(f.len, vlen)
            }
            ArcKind::WPlus => p.w.slice(f.phase, wlen),
            ArcKind::WMinus => winv.slice(f.phase, wlen),
        },
    };
    for step in path.spine() {
        match *step {
            SpineStep::V(e) => factors.push((true, e as i64)),
            SpineStep::W(k) => factors.push((false, k)),
        }
    }
    let right = match path.suffix() {
        None => Word::identity(),
        Some(f) => match f.kind {
            ArcKind::VPlus => v.slice(0, f.len),
            ArcKind::VMinus => {
                // prefix of v⁻¹ of length d equals v⁻¹ · v[0..|v|−d]
                factors.push((true, -1));
                v.slice(0, vlen - f.len)
            }
            ArcKind::WPlus => p.w.slice(0, f.len),
            ArcKind::WMinus => winv.slice(0, f.len),
        },
    };
    (left, right, factors)
}

/// All GFP words sharing the initial and final point with `path`, with spine
/// v-exponents in {−1, 1..K} and w-exponents in [−K, K] (K the configured
/// w-exponent bound), at most `max_v_blocks` v-blocks.  Includes the input.
/// Finite by truncation; reported membership is always "under bound K".
pub fn incident_monomials_bounded(
    path: &GfpPath,
    p: &Params,
    max_v_blocks: usize,
) -> Vec<Word> {
    let k_bound = p.w_exponent_bound;
    let (left, right, _) = frame_decomposition(path, p);
    let v = p.v_word();
    let mut out: std::collections::HashSet<Word> = std::collections::HashSet::new();
    let v_exps: Vec<i64> = std::iter::once(-1).chain(1..=k_bound).collect();
    let w_exps: Vec<i64> = (-k_bound..=k_bound).collect();

    let assemble = |blocks: &[(i64, i64)], trailing_w: i64| -> Word {
        // blocks: (w-exponent before the v-block, v-exponent)
        let mut acc = left.clone();
        for &(wk, vl) in blocks {
            if wk != 0 {
                acc = acc.multiply(&p.w.pow(wk));
            }
            acc = acc.multiply(&v.pow(vl));
        }
        if trailing_w != 0 {
            acc = acc.multiply(&p.w.pow(trailing_w));
        }
        acc.multiply(&right)
    };

    for &k0 in &w_exps {
        out.insert(assemble(&[], k0));
    }
    if max_v_blocks >= 1 {
        for &k0 in &w_exps {
            for &l1 in &v_exps {
                for &k1 in &w_exps {
                    out.insert(assemble(&[(k0, l1)], k1));
                }
            }
        }
    }
    if max_v_blocks >= 2 {
        for &k0 in &w_exps {
            for &l1 in &v_exps {
                for &k1 in &w_exps {
                    if k1 == 0 {
                        continue;
                    }
                    for &l2 in &v_exps {
                        for &k2 in &w_exps {
                            out.insert(assemble(&[(k0, l1), (k1, l2)], k2));
                        }
                    }
                }
            }
        }
    }
    out.insert(path.assemble(p));
    let mut words: Vec<Word> = out.into_iter().collect();
    // length-first ordering keeps the sort cheap despite long shared prefixes
    words.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    words
}

/// Incident monomials at the spec's default truncation (≤ 2 v-blocks).
pub fn incident_monomials(path: &GfpPath, p: &Params) -> Vec<Word> {
    incident_monomials_bounded(path, p, 2)
}

/// A located v⁻¹-window: a factor of v⁻¹ inside the host.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InverseVWindow {
    /// host span of the window
    pub start: usize,
    pub end: usize,
    /// the window in v⁻¹-pattern coordinates [lo, hi)
    pub pattern_lo: usize,
    pub pattern_hi: usize,
    pub ys: usize,
}

/// The y-richest factor of v⁻¹ occurring in `u` (a window of the v⁻¹
/// pattern lying inside a single period).  λ-forbiddenness is decided
/// against this quantity.
pub fn richest_inverse_v_window(u: &Word, p: &Params) -> Option<InverseVWindow> {
    let period = p.v().len();
    let mut best: Option<InverseVWindow> = None;
    for f in scan_fragments(u, p) {
        if f.kind != ArcKind::VMinus {
            continue;
        }
        let len = f.len();
        // candidate single-period windows inside the fragment
        let mut windows: Vec<(usize, usize)> = Vec::new(); // fragment-relative
        if len >= period {
            // contains a whole v⁻¹
            let to_boundary = (period - f.phase % period) % period;
            windows.push((to_boundary, to_boundary + period));
        } else {
            let a = f.phase % period;
            if a + len <= period {
                windows.push((0, len));
            } else {
                windows.push((0, period - a));
                windows.push((period - a, len));
            }
        }
        for (lo, hi) in windows {
            let sub = Fragment {
                kind: ArcKind::VMinus,
                phase: (f.phase + lo) % period,
                len: hi - lo,
            };
            let ys = sub.ys(p);
            let cand = InverseVWindow {
                start: f.start + lo,
                end: f.start + hi,
                pattern_lo: (f.phase + lo) % period,
                pattern_hi: (f.phase + lo) % period + (hi - lo),
                ys,
            };
            if best.map_or(true, |b| ys > b.ys) {
                best = Some(cand);
            }
        }
    }
    best
}

/// Largest y-count among single-period v⁻¹-windows in `u` (0 when none).
pub fn max_inverse_v_window_ys(u: &Word, p: &Params) -> usize {
    richest_inverse_v_window(u, p).map_or(0, |w| w.ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::RawParams;

    fn desk() -> Params {
        Params::desk_scale()
    }

    /// Small parameters for exhaustive checks (τ constraint relaxed is not
    /// possible; these params are still valid: β−α=100 keeps ε small).
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
    fn whole_v_is_one_occurrence_of_measure_one() {
        let p = desk();
        let occ = maximal_occurrences(p.v_word(), &p);
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].span(), (0, p.v().len()));
        assert_eq!(occ[0].measure(&p), p.measure(100));
        assert_eq!(occ[0].path.spine(), &[SpineStep::V(1)]);
    }

    #[test]
    fn v_z_z_v_gives_two_big_members_and_a_stray_fragment() {
        let p = desk();
        let u = parse("vzzv", &p);
        let occ = maximal_occurrences(&u, &p);
        // v·z (the z extends v along the w-arc), the lone second z as a
        // measure-0 fragment, and the trailing v
        assert_eq!(occ.len(), 3);
        assert_eq!(occ[0].span(), (0, p.v().len() + 1));
        assert_eq!(occ[1].span(), (p.v().len() + 1, p.v().len() + 2));
        assert_eq!(occ[2].span(), (p.v().len() + 2, u.len()));
        assert_eq!(occ[0].ys(), 100);
        assert_eq!(occ[1].ys(), 0);
        assert_eq!(occ[2].ys(), 100);
    }

    #[test]
    fn v_w_v_merges_into_one_gfp() {
        let p = desk();
        let u = parse("vwv", &p);
        let occ = maximal_occurrences(&u, &p);
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].span(), (0, u.len()));
        assert_eq!(occ[0].ys(), 200);
        assert_eq!(
            occ[0].path.spine(),
            &[SpineStep::V(1), SpineStep::W(1), SpineStep::V(1)]
        );
    }

    #[test]
    fn parse_gfp_round_trips_basic_paths() {
        let p = desk();
        for s in ["v", "vw", "wv", "V", "vwv", "wVw", "vv", "w"] {
            let u = parse(s, &p);
            let path = parse_gfp(&u, &p).unwrap_or_else(|| panic!("{s} should parse"));
            assert_eq!(path.assemble(&p), u, "round trip for {s}");
        }
    }

    #[test]
    fn parse_gfp_middle_chunk_of_v_inverse() {
        let p = desk();
        // v_m⁻¹ with 20 y's from the middle of v⁻¹
        let v = p.v_word();
        let a = p.v().y_positions()[40] + 1;
        let b = p.v().y_positions()[60] + 1;
        let vm = v.slice(a, b);
        let u = vm.invert();
        let path = parse_gfp(&u, &p).expect("middle chunk parses");
        assert!(path.spine().is_empty());
        assert!(path.suffix().is_none());
        assert_eq!(path.assemble(&p), u);
        assert_eq!(path.ys(&p), 20);
    }

    #[test]
    fn parse_gfp_rejects_non_gfp_words() {
        let p = desk();
        for s in ["xz", "zx", "yy", "xY", "zz"] {
            let u = Word::parse(s, &p.alphabet).unwrap();
            assert!(parse_gfp(&u, &p).is_none(), "{s} must not parse");
        }
    }

    #[test]
    fn identity_parses_as_trivial_path() {
        let p = desk();
        let path = parse_gfp(&Word::identity(), &p).unwrap();
        assert!(path.is_trivial());
        assert_eq!(path.start(&p), PathPoint::origin());
        assert_eq!(path.classify(&p), PathType::VV);
    }

    #[test]
    fn lambda_measure_examples() {
        let p = desk();
        let v = parse_gfp(p.v_word(), &p).unwrap();
        assert_eq!(v.lambda_measure(&p), Rational::new(1, 1));
        let w3 = parse_gfp(&p.w.pow(3), &p).unwrap();
        assert_eq!(w3.lambda_measure(&p), Rational::new(0, 1));
        let vwv = parse_gfp(&parse("vwv", &p), &p).unwrap();
        assert_eq!(vwv.lambda_measure(&p), Rational::new(2, 1));
    }

    #[test]
    fn classify_paths_by_endpoint_arcs() {
        let p = desk();
        let vv = parse_gfp(p.v_word(), &p).unwrap();
        assert_eq!(vv.classify(&p), PathType::VV);
        // v_f · w_i : ends on a w-arc
        let vf = p.v_word().slice(5000, 5550);
        let u = vf.multiply(&Word::parse("z", &p.alphabet).unwrap());
        let path = parse_gfp(&u, &p).unwrap();
        assert_eq!(path.classify(&p), PathType::VW);
        // w_f ... w_i
        let u = Word::parse("t", &p.alphabet).unwrap()
            .multiply(p.v_word())
            .multiply(&Word::parse("z", &p.alphabet).unwrap());
        let path = parse_gfp(&u, &p).unwrap();
        assert_eq!(path.classify(&p), PathType::WW);
    }

    #[test]
    fn incident_monomials_of_identity_contain_generator_monomials() {
        let p = desk();
        let path = GfpPath::trivial();
        let inc = incident_monomials_bounded(&path, &p, 1);
        let v = p.v_word().clone();
        let vw = v.multiply(&p.w);
        assert!(inc.contains(&Word::identity()));
        assert!(inc.contains(&v));
        assert!(inc.contains(&vw));
    }

    #[test]
    fn incident_monomials_respect_zero_bound_semantics() {
        let mut raw = RawParams::desk_scale();
        raw.w_exponent_bound = 1;
        let p = raw.validate().unwrap();
        let path = parse_gfp(p.v_word(), &p).unwrap();
        let inc = incident_monomials_bounded(&path, &p, 1);
        // every member's w-exponents bounded by 1: no w² factor anywhere
        let ww = p.w.multiply(&p.w);
        for m in &inc {
            let s = m.format(&p.alphabet);
            assert!(!s.contains(&ww.format(&p.alphabet)), "{s} exceeds bound");
        }
    }

    #[test]
    fn occurrences_are_pairwise_non_nested_with_small_overlaps() {
        let p = desk();
        let words = [
            parse("vzzv", &p),
            parse("vwv", &p),
            parse("vzV", &p),
            parse("wvWv", &p),
            parse("zvtvz", &p),
        ];
        for u in &words {
            let occ = maximal_occurrences(u, &p);
            for a in &occ {
                for b in &occ {
                    if a.span() == b.span() {
                        continue;
                    }
                    assert!(
                        !(a.start <= b.start && b.end <= a.end),
                        "nested members in {u}"
                    );
                    if a.overlaps(b) {
                        let lo = a.start.max(b.start);
                        let hi = a.end.min(b.end);
                        let piece = u.slice(lo, hi);
                        let ys = piece.count_gen(Alphabet::Y);
                        assert!(p.measure(ys) <= p.eps(), "overlap too big in {u}");
                    }
                }
            }
        }
    }

    #[test]
    fn unique_alignment_of_rich_subwords() {
        // subwords of v with >= 2 y's localize at exactly one position
        let p = desk();
        let v = p.v_word();
        let a = p.v().y_positions()[10] - 3;
        let b = p.v().y_positions()[12] + 1;
        let sub = v.slice(a, b);
        let occ = maximal_occurrences(&sub, &p);
        assert_eq!(occ.len(), 1);
        let path = &occ[0].path;
        assert_eq!(path.prefix().unwrap().phase, a);
    }

    #[test]
    fn staggered_single_y_fragments_both_survive() {
        // x^{β−1} y x^{β−1}: no single factor of v^∞ covers it, two staggered
        // maximal occurrences remain
        let p = desk();
        let b1 = (p.beta - 1) as usize;
        let mut s = String::new();
        s.push_str(&"x".repeat(b1));
        s.push('y');
        s.push_str(&"x".repeat(b1));
        let u = Word::parse(&s, &p.alphabet).unwrap();
        assert!(parse_gfp(&u, &p).is_none());
        let occ = maximal_occurrences(&u, &p);
        assert!(!occ.is_empty());
        for o in &occ {
            assert!(o.len() < u.len());
            assert_eq!(o.ys(), 1);
        }
    }
}
