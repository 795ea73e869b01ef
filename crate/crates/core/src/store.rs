//! Zero records, immutable zero sets and their persistence.
//!
//! A [`ZeroSet`] is an ordinate-sorted multiset of zeros over a height window
//! `(t_min, t_max]`. Multiplicity lives in each record; records are never
//! duplicated to express it.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use thiserror::Error;

/// Tolerance for deciding `β = 1/2` and `β + β′ = 1`.
pub const BETA_TOL: f64 = 1e-12;

/// No nontrivial zero has ordinate in `(0, 14]`.
pub const ZERO_FREE_HEIGHT: f64 = 14.0;

/// Default ordinate accuracy for Odlyzko-format tables.
pub const ODLYZKO_DEFAULT_ABS_ERROR: f64 = 4e-9;

pub const NATIVE_VERSION: &str = "ZPC1";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("line {line}: cannot parse ordinate {text:?}")]
    ParseError { line: usize, text: String },
    #[error("line {line}: ordinate {value} does not exceed the previous one")]
    NotAscending { line: usize, value: f64 },
    #[error("input contains no ordinates")]
    EmptyFile,
    #[error("unsupported native format version {found:?} (expected {NATIVE_VERSION})")]
    VersionMismatch { found: String },
    #[error("checksum mismatch: file is truncated or corrupted")]
    ChecksumMismatch,
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Computed,
    Ingested,
    Synthetic,
}

impl Source {
    fn as_str(self) -> &'static str {
        match self {
            Source::Computed => "computed",
            Source::Ingested => "ingested",
            Source::Synthetic => "synthetic",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "computed" => Some(Source::Computed),
            "ingested" => Some(Source::Ingested),
            "synthetic" => Some(Source::Synthetic),
            _ => None,
        }
    }
}

/// One zero `ρ = β + iγ` with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub gamma: f64,
    pub beta: f64,
    pub multiplicity: u32,
    pub abs_error: f64,
    pub source: Source,
}

impl ZeroRecord {
    /// A simple zero on the critical line.
    pub fn on_line(gamma: f64, abs_error: f64, source: Source) -> Self {
        Self { gamma, beta: 0.5, multiplicity: 1, abs_error, source }
    }

    pub fn validate(&self) -> Result<(), StoreError> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(StoreError::InvariantViolation(format!("gamma {} must be > 0", self.gamma)));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(StoreError::InvariantViolation(format!(
                "beta {} outside the critical strip (0, 1)",
                self.beta
            )));
        }
        if self.multiplicity == 0 {
            return Err(StoreError::InvariantViolation("multiplicity must be ≥ 1".into()));
        }
        if !(self.abs_error >= 0.0 && self.abs_error.is_finite()) {
            return Err(StoreError::InvariantViolation(format!("abs_error {} invalid", self.abs_error)));
        }
        Ok(())
    }

    pub fn is_on_critical_line(&self) -> bool {
        (self.beta - 0.5).abs() <= BETA_TOL
    }

    /// `β + β′ = 1`, i.e. the two records are reflections of each other.
    pub fn is_reflection_of(&self, other: &ZeroRecord) -> bool {
        (self.beta + other.beta - 1.0).abs() <= BETA_TOL
    }
}

/// Outcome of comparing a sign-change count against the theta-based count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountCertificate {
    pub window: (f64, f64),
    pub found: u64,
    pub formula_count: f64,
    pub certified: bool,
    pub residual: f64,
}

/// Why a set may be treated as covering its window completely.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Completeness {
    /// Produced by a scan; complete iff the certificate passed.
    Certified { certificate: CountCertificate },
    /// Taken from a published table that lists every zero in its range.
    IngestedComplete,
    /// A synthetic configuration is complete by construction.
    Synthetic,
    Unknown,
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        match self {
            Completeness::Certified { certificate } => certificate.certified,
            Completeness::IngestedComplete | Completeness::Synthetic => true,
            Completeness::Unknown => false,
        }
    }
}

/// Immutable, ordinate-sorted multiset of zeros over `(t_min, t_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    records: Vec<ZeroRecord>,
    t_min: f64,
    t_max: f64,
    metadata: String,
    completeness: Completeness,
}

impl ZeroSet {
    pub fn new(
        mut records: Vec<ZeroRecord>,
        t_min: f64,
        t_max: f64,
        metadata: impl Into<String>,
        completeness: Completeness,
    ) -> Result<Self, StoreError> {
        if !(t_min.is_finite() && t_max.is_finite() && t_min <= t_max && t_min >= 0.0) {
            return Err(StoreError::InvariantViolation(format!("bad window ({t_min}, {t_max}]")));
        }
        for r in &records {
            r.validate()?;
            if !(r.gamma > t_min && r.gamma <= t_max) {
                return Err(StoreError::InvariantViolation(format!(
                    "gamma {} outside window ({t_min}, {t_max}]",
                    r.gamma
                )));
            }
        }
        records.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta)));
        for w in records.windows(2) {
            if w[0].gamma == w[1].gamma && (w[0].beta - w[1].beta).abs() <= BETA_TOL {
                return Err(StoreError::InvariantViolation(format!(
                    "duplicate zero at beta {} gamma {}",
                    w[0].beta, w[0].gamma
                )));
            }
        }
        Ok(Self { records, t_min, t_max, metadata: metadata.into(), completeness })
    }

    pub fn empty(t_min: f64, t_max: f64, completeness: Completeness) -> Result<Self, StoreError> {
        Self::new(Vec::new(), t_min, t_max, "", completeness)
    }

    pub fn records(&self) -> &[ZeroRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn completeness(&self) -> &Completeness {
        &self.completeness
    }

    pub fn is_complete(&self) -> bool {
        self.completeness.is_complete()
    }

    pub fn certificate(&self) -> Option<&CountCertificate> {
        match &self.completeness {
            Completeness::Certified { certificate } => Some(certificate),
            _ => None,
        }
    }

    pub fn gammas(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.gamma)
    }

    /// `N(T)`: zeros with `0 < γ ≤ T`, counted with multiplicity.
    pub fn count_up_to(&self, t: f64) -> u64 {
        let end = self.records.partition_point(|r| r.gamma <= t);
        self.records[..end].iter().map(|r| r.multiplicity as u64).sum()
    }

    /// Total multiplicity `Σ m`.
    pub fn total_multiplicity(&self) -> u64 {
        self.records.iter().map(|r| r.multiplicity as u64).sum()
    }

    /// Whether `(lo, hi]` lies inside this set's window. A synthetic set is
    /// the whole configuration, so it covers every window. For zeta zeros the
    /// strip below height 14 is zero-free, so a window starting there reaches
    /// down to 0.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        match self.completeness {
            Completeness::Synthetic => lo >= 0.0 && lo <= hi,
            _ => {
                let floor = if self.t_min <= ZERO_FREE_HEIGHT { 0.0 } else { self.t_min };
                floor <= lo && hi <= self.t_max
            }
        }
    }

    /// Sub-set on `(lo, hi]`, which must lie inside the current window.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<ZeroSet, StoreError> {
        if !self.covers(lo, hi) || lo > hi {
            return Err(StoreError::InvariantViolation(format!(
                "window ({lo}, {hi}] not inside ({}, {}]",
                self.t_min, self.t_max
            )));
        }
        let records = self.records.iter().filter(|r| r.gamma > lo && r.gamma <= hi).copied().collect();
        Ok(ZeroSet {
            records,
            t_min: lo,
            t_max: hi,
            metadata: self.metadata.clone(),
            completeness: self.completeness,
        })
    }

    /// The first `n` records; the window is cut at the n-th ordinate.
    pub fn first_n(&self, n: usize) -> ZeroSet {
        if n >= self.records.len() {
            return self.clone();
        }
        // keep whole ordinate groups so that ties are not split
        let mut end = n;
        while end > 0 && end < self.records.len() && self.records[end].gamma == self.records[end - 1].gamma {
            end += 1;
        }
        let t_max = if end == 0 { self.t_min } else { self.records[end - 1].gamma };
        ZeroSet {
            records: self.records[..end].to_vec(),
            t_min: self.t_min,
            t_max,
            metadata: self.metadata.clone(),
            completeness: self.completeness,
        }
    }

    pub fn max_gamma(&self) -> Option<f64> {
        self.records.last().map(|r| r.gamma)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("gamma,beta,multiplicity\n");
        for r in &self.records {
            let _ = writeln!(out, "{:?},{:?},{}", r.gamma, r.beta, r.multiplicity);
        }
        out
    }

    pub fn to_json(&self) -> Result<String, StoreError> {
        Ok(serde_json::to_string_pretty(&self.records)?)
    }

    /// Native `ZPC1` text encoding.
    pub fn to_native(&self) -> String {
        let mut body = String::new();
        let _ = writeln!(body, "{NATIVE_VERSION}");
        let _ = writeln!(body, "window {:?} {:?}", self.t_min, self.t_max);
        match &self.completeness {
            Completeness::Certified { certificate: c } => {
                let _ = writeln!(
                    body,
                    "completeness certified {:?} {:?} {} {:?} {} {:?}",
                    c.window.0,
                    c.window.1,
                    c.found,
                    c.formula_count,
                    if c.certified { 1 } else { 0 },
                    c.residual
                );
            }
            Completeness::IngestedComplete => body.push_str("completeness ingested\n"),
            Completeness::Synthetic => body.push_str("completeness synthetic\n"),
            Completeness::Unknown => body.push_str("completeness unknown\n"),
        }
        let _ = writeln!(body, "meta {}", escape(&self.metadata));
        let _ = writeln!(body, "records {}", self.records.len());
        for r in &self.records {
            let _ = writeln!(
                body,
                "{:?} {:?} {} {:?} {}",
                r.gamma,
                r.beta,
                r.multiplicity,
                r.abs_error,
                r.source.as_str()
            );
        }
        let crc = crc32fast::hash(body.as_bytes());
        let _ = writeln!(body, "crc32 {crc:08x}");
        body
    }

    pub fn from_native(text: &str) -> Result<ZeroSet, StoreError> {
        let first = text.lines().next().unwrap_or("");
        if first != NATIVE_VERSION {
            return Err(StoreError::VersionMismatch { found: first.to_string() });
        }
        let crc_pos = text.rfind("\ncrc32 ").ok_or(StoreError::ChecksumMismatch)?;
        let payload = &text[..crc_pos + 1];
        let crc_line = text[crc_pos + 1..].trim_end_matches('\n');
        let stated = crc_line
            .strip_prefix("crc32 ")
            .and_then(|h| u32::from_str_radix(h.trim(), 16).ok())
            .ok_or(StoreError::ChecksumMismatch)?;
        if crc_line.contains('\n') || crc32fast::hash(payload.as_bytes()) != stated {
            return Err(StoreError::ChecksumMismatch);
        }

        let mut lines = payload.lines().enumerate().skip(1);
        let mut next = |key: &str| -> Result<(usize, String), StoreError> {
            let (i, l) = lines
                .next()
                .ok_or(StoreError::Malformed { line: 0, reason: format!("missing {key} line") })?;
            let rest = l
                .strip_prefix(key)
                .ok_or(StoreError::Malformed { line: i + 1, reason: format!("expected {key}") })?;
            Ok((i + 1, rest.trim_start_matches(' ').to_string()))
        };
        let (ln, window) = next("window")?;
        let w: Vec<f64> = parse_fields(&window, ln)?;
        if w.len() != 2 {
            return Err(StoreError::Malformed { line: ln, reason: "window needs two values".into() });
        }
        let (ln, comp) = next("completeness")?;
        let completeness = parse_completeness(&comp, ln)?;
        let (_, meta) = next("meta")?;
        let (ln, count) = next("records")?;
        let count: usize = count
            .parse()
            .map_err(|_| StoreError::Malformed { line: ln, reason: "bad record count".into() })?;
        let mut records = Vec::with_capacity(count);
        for (i, l) in lines {
            let parts: Vec<&str> = l.split(' ').collect();
            let bad = |reason: &str| StoreError::Malformed { line: i + 1, reason: reason.to_string() };
            if parts.len() != 5 {
                return Err(bad("record needs 5 fields"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
            records.push(ZeroRecord {
                gamma: num(parts[0])?,
                beta: num(parts[1])?,
                multiplicity: parts[2].parse().map_err(|_| bad("bad multiplicity"))?,
                abs_error: num(parts[3])?,
                source: Source::parse(parts[4]).ok_or_else(|| bad("bad source"))?,
            });
        }
        if records.len() != count {
            return Err(StoreError::Malformed { line: 0, reason: "record count mismatch".into() });
        }
        ZeroSet::new(records, w[0], w[1], unescape(&meta), completeness)
    }

    pub fn save_native(&self, path: impl AsRef<Path>) -> Result<(), StoreError> {
        std::fs::write(path, self.to_native())?;
        Ok(())
    }

    pub fn load_native(path: impl AsRef<Path>) -> Result<ZeroSet, StoreError> {
        let text = std::fs::read_to_string(path)?;
        ZeroSet::from_native(&text)
    }
}

fn parse_fields(s: &str, line: usize) -> Result<Vec<f64>, StoreError> {
    s.split(' ')
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| StoreError::Malformed { line, reason: format!("bad number {p:?}") }))
        .collect()
}

fn parse_completeness(s: &str, line: usize) -> Result<Completeness, StoreError> {
    let bad = |r: &str| StoreError::Malformed { line, reason: r.to_string() };
    let mut it = s.split(' ');
    match it.next() {
        Some("ingested") => Ok(Completeness::IngestedComplete),
        Some("synthetic") => Ok(Completeness::Synthetic),
        Some("unknown") => Ok(Completeness::Unknown),
        Some("certified") => {
            let f: Vec<&str> = it.collect();
            if f.len() != 6 {
                return Err(bad("certificate needs 6 fields"));
            }
            let num = |x: &str| x.parse::<f64>().map_err(|_| bad("bad certificate number"));
            Ok(Completeness::Certified {
                certificate: CountCertificate {
                    window: (num(f[0])?, num(f[1])?),
                    found: f[2].parse().map_err(|_| bad("bad found count"))?,
                    formula_count: num(f[3])?,
                    certified: match f[4] {
                        "1" => true,
                        "0" => false,
                        _ => return Err(bad("bad certified flag")),
                    },
                    residual: num(f[5])?,
                },
            })
        }
        _ => Err(bad("unknown completeness")),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\n', "\\n").replace('\r', "\\r")
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some('r') => out.push('\r'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Options for reading Odlyzko-style ordinate tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IngestOptions {
    /// Upper end of the window, if the table is known to be complete beyond
    /// its last ordinate.
    pub t_max_hint: Option<f64>,
    pub abs_error: f64,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self { t_max_hint: None, abs_error: ODLYZKO_DEFAULT_ABS_ERROR }
    }
}

/// Parse one ascending decimal ordinate per line. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_odlyzko<R: Read>(reader: R, opts: IngestOptions) -> Result<ZeroSet, StoreError> {
    let reader = BufReader::new(reader);
    let mut records = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let value: f64 = text
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v > 0.0)
            .ok_or_else(|| StoreError::ParseError { line: i + 1, text: text.to_string() })?;
        if value <= prev {
            return Err(StoreError::NotAscending { line: i + 1, value });
        }
        prev = value;
        records.push(ZeroRecord::on_line(value, opts.abs_error, Source::Ingested));
    }
    if records.is_empty() {
        return Err(StoreError::EmptyFile);
    }
    let t_max = opts.t_max_hint.map_or(prev, |h| h.max(prev));
    ZeroSet::new(records, 0.0, t_max, "odlyzko table", Completeness::IngestedComplete)
}

pub fn ingest_odlyzko(path: impl AsRef<Path>, opts: IngestOptions) -> Result<ZeroSet, StoreError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let set = parse_odlyzko(file, opts)?;
    let meta = format!("odlyzko table {}", path.display());
    ZeroSet::new(set.records, set.t_min, set.t_max, meta, Completeness::IngestedComplete)
}

/// Write ordinates in the one-per-line Odlyzko layout.
pub fn write_odlyzko(set: &ZeroSet) -> String {
    let mut out = String::new();
    for r in set.records() {
        let _ = writeln!(out, "{:.9}", r.gamma);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub beta: f64,
    pub gamma: f64,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

fn yes() -> bool {
    true
}

/// A hand-built zero configuration, possibly off the critical line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub seeds: Vec<Seed>,
    #[serde(default = "yes")]
    pub symmetry_completion: bool,
}

impl SyntheticSpec {
    pub fn new(seeds: Vec<Seed>) -> Self {
        Self { seeds, symmetry_completion: true }
    }

    pub fn from_tuples(seeds: &[(f64, f64, u32)]) -> Self {
        Self::new(seeds.iter().map(|&(beta, gamma, multiplicity)| Seed { beta, gamma, multiplicity }).collect())
    }
}

/// Build a synthetic set. Duplicate `(β, γ)` seeds merge by adding
/// multiplicities; with completion on, every off-line record gets its
/// reflection `(1 − β, γ)` carrying the larger of the two multiplicities.
pub fn build_synthetic(spec: &SyntheticSpec) -> Result<ZeroSet, StoreError> {
    // key: (gamma bits, beta bits) after snapping β to an existing record
    let mut merged: BTreeMap<(u64, u64), ZeroRecord> = BTreeMap::new();
    let insert = |merged: &mut BTreeMap<(u64, u64), ZeroRecord>, rec: ZeroRecord, add: bool| {
        let existing = merged
            .values_mut()
            .find(|r| r.gamma == rec.gamma && (r.beta - rec.beta).abs() <= BETA_TOL);
        match existing {
            Some(r) if add => r.multiplicity += rec.multiplicity,
            Some(r) => r.multiplicity = r.multiplicity.max(rec.multiplicity),
            None => {
                merged.insert((rec.gamma.to_bits(), rec.beta.to_bits()), rec);
            }
        }
    };
    for s in &spec.seeds {
        let rec = ZeroRecord {
            gamma: s.gamma,
            beta: s.beta,
            multiplicity: s.multiplicity,
            abs_error: 0.0,
            source: Source::Synthetic,
        };
        rec.validate()?;
        insert(&mut merged, rec, true);
    }
    if spec.symmetry_completion {
        let snapshot: Vec<ZeroRecord> = merged.values().copied().collect();
        for r in snapshot.iter().filter(|r| !r.is_on_critical_line()) {
            let partner = ZeroRecord { beta: 1.0 - r.beta, ..*r };
            insert(&mut merged, partner, false);
        }
        // a partner that already existed may carry the larger multiplicity
        let snapshot: Vec<ZeroRecord> = merged.values().copied().collect();
        for r in snapshot.iter().filter(|r| !r.is_on_critical_line()) {
            let partner = ZeroRecord { beta: 1.0 - r.beta, ..*r };
            insert(&mut merged, partner, false);
        }
    }
    let records: Vec<ZeroRecord> = merged.into_values().collect();
    let t_max = records.iter().map(|r| r.gamma).fold(0.0, f64::max);
    ZeroSet::new(records, 0.0, t_max, "synthetic", Completeness::Synthetic)
}

/// Whether every off-line record has its reflection at the same ordinate
/// with the same multiplicity.
pub fn is_symmetry_complete(set: &ZeroSet) -> bool {
    first_symmetry_violation(set).is_none()
}

pub fn first_symmetry_violation(set: &ZeroSet) -> Option<ZeroRecord> {
    let recs = set.records();
    let mut i = 0;
    while i < recs.len() {
        let mut j = i;
        while j < recs.len() && recs[j].gamma == recs[i].gamma {
            j += 1;
        }
        let group = &recs[i..j];
        for r in group.iter().filter(|r| !r.is_on_critical_line()) {
            let ok = group.iter().any(|p| p.is_reflection_of(r) && p.multiplicity == r.multiplicity);
            if !ok {
                return Some(*r);
            }
        }
        i = j;
    }
    None
}
