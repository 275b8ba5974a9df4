//! Preparation of the eight-mode cluster state, displacement-error
//! injection, syndrome measurement, decoding, and feedforward correction.
//!
//! One protected pairwise p-correlation is chosen out of the five the
//! cluster supports; the remaining four serve as error syndromes. The
//! decoder table is generated by enumerating identical-amplitude error
//! patterns of weight 0..3 over modes 1..6 and resolving collisions toward
//! the minimal-weight explanation.
//!
//! Mode labels in this module are one-based, matching the measurement
//! tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::gaussian::{GaussianState, QuadratureCombination};
use crate::network::{compose_network, reference_network_spec, reference_unitary};

/// The five pairwise correlations the cluster protects, in order.
pub const PROTECTED_PAIRS: [(usize, usize); 5] = [(1, 2), (2, 5), (3, 6), (4, 3), (5, 6)];

/// How the preparation symplectic is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateSource {
    /// Embed the closed-form unitary directly.
    FromUnitary,
    /// Compose the 24-element beam-splitter network.
    FromNetwork,
}

/// Parameters of a prepared cluster: uniform input squeezing, the protected
/// pair, and the preparation route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterConfig {
    pub r: f64,
    pub protected: (usize, usize),
    pub source: StateSource,
}

impl ClusterConfig {
    pub fn new(r: f64, protected: (usize, usize), source: StateSource) -> Result<Self, CoreError> {
        if r < 0.0 {
            return Err(CoreError::param("r", "squeezing parameter must be >= 0"));
        }
        if !PROTECTED_PAIRS.contains(&protected) {
            return Err(CoreError::param(
                "protected",
                format!("pair {protected:?} is not one of the protected correlations"),
            ));
        }
        Ok(Self { r, protected, source })
    }

    /// Default configuration: protect p5 - p6, prepare from the unitary.
    pub fn standard(r: f64) -> Result<Self, CoreError> {
        Self::new(r, (5, 6), StateSource::FromUnitary)
    }

    /// The four auxiliary correlations, in table order.
    pub fn syndrome_pairs(&self) -> [(usize, usize); 4] {
        let mut out = [(0, 0); 4];
        let mut k = 0;
        for pair in PROTECTED_PAIRS {
            if pair != self.protected {
                out[k] = pair;
                k += 1;
            }
        }
        out
    }

    /// The protected correlation as a quadrature combination.
    pub fn protected_combination(&self) -> QuadratureCombination {
        let (i, j) = self.protected;
        QuadratureCombination::p_diff(8, i - 1, j - 1).expect("valid pair")
    }

    /// Syndrome correlation `index` (1..=4) as a quadrature combination.
    pub fn syndrome_combination(&self, index: usize) -> Result<QuadratureCombination, CoreError> {
        if !(1..=4).contains(&index) {
            return Err(CoreError::param("index", "syndrome index must be in 1..=4"));
        }
        let (i, j) = self.syndrome_pairs()[index - 1];
        QuadratureCombination::p_diff(8, i - 1, j - 1)
    }
}

/// Prepare the eight-mode cluster: p-squeezed vacua through the network.
pub fn prepare_cluster(cfg: &ClusterConfig) -> Result<GaussianState, CoreError> {
    let mut state = GaussianState::vacuum(8)?;
    for mode in 0..8 {
        state = state.squeeze_p(mode, cfg.r)?;
    }
    let map = match cfg.source {
        StateSource::FromUnitary => reference_unitary(),
        StateSource::FromNetwork => compose_network(&reference_network_spec())?,
    };
    state.apply(&map.to_symplectic()?)
}

/// Amplitude model for an identical-displacement error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AmplitudeModel {
    /// Every affected mode is displaced by the same fixed amount.
    Fixed(f64),
    /// One zero-mean normal draw per trial, shared by all affected modes.
    Gaussian { sigma: f64 },
}

/// A p-displacement error pattern: which of modes 1..6 are hit, and how.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorPattern {
    modes: BTreeSet<usize>,
    amplitude: AmplitudeModel,
}

impl ErrorPattern {
    pub fn new(modes: impl IntoIterator<Item = usize>, amplitude: AmplitudeModel) -> Result<Self, CoreError> {
        let modes: BTreeSet<usize> = modes.into_iter().collect();
        if modes.iter().any(|&m| m == 0 || m > 6) {
            return Err(CoreError::param("modes", "error modes must lie in 1..=6"));
        }
        match amplitude {
            AmplitudeModel::Fixed(eps) if !modes.is_empty() && eps == 0.0 => {
                return Err(CoreError::param("amplitude", "fixed amplitude must be nonzero"));
            }
            AmplitudeModel::Gaussian { sigma } if sigma <= 0.0 => {
                return Err(CoreError::param("amplitude", "gaussian sigma must be positive"));
            }
            _ => {}
        }
        Ok(Self { modes, amplitude })
    }

    pub fn empty() -> Self {
        Self {
            modes: BTreeSet::new(),
            amplitude: AmplitudeModel::Fixed(1.0),
        }
    }

    pub fn modes(&self) -> &BTreeSet<usize> {
        &self.modes
    }

    pub fn weight(&self) -> usize {
        self.modes.len()
    }

    pub fn amplitude(&self) -> AmplitudeModel {
        self.amplitude
    }
}

/// Displace every listed mode by the pattern's shared amplitude.
/// Returns the transformed state and the amplitude actually applied.
pub fn inject(
    state: &GaussianState,
    pattern: &ErrorPattern,
    rng_seed: u64,
) -> Result<(GaussianState, f64), CoreError> {
    if pattern.modes.is_empty() {
        return Ok((state.clone(), 0.0));
    }
    let amount = match pattern.amplitude {
        AmplitudeModel::Fixed(eps) => eps,
        AmplitudeModel::Gaussian { sigma } => {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            Normal::new(0.0, sigma)
                .map_err(|_| CoreError::param("sigma", "invalid normal parameter"))?
                .sample(&mut rng)
        }
    };
    let mut out = state.clone();
    for &m in &pattern.modes {
        out = out.displace_p(m - 1, amount)?;
    }
    Ok((out, amount))
}

/// How syndrome values are read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureMode {
    /// Exact means: the infinite-squeezing idealization.
    Expectation,
    /// One joint homodyne draw including finite-squeezing noise.
    Sampled(u64),
}

/// Measure the four auxiliary correlations.
pub fn measure_syndromes(
    state: &GaussianState,
    cfg: &ClusterConfig,
    mode: MeasureMode,
) -> Result<[f64; 4], CoreError> {
    let combos: Vec<QuadratureCombination> = (1..=4)
        .map(|i| cfg.syndrome_combination(i))
        .collect::<Result<_, _>>()?;
    let mut raw = [0.0; 4];
    match mode {
        MeasureMode::Expectation => {
            for (i, c) in combos.iter().enumerate() {
                raw[i] = state.combination_stats(c)?.0;
            }
        }
        MeasureMode::Sampled(seed) => {
            let draw = state.sample_quadratures(&combos, seed)?;
            for i in 0..4 {
                raw[i] = draw[i];
            }
        }
    }
    Ok(raw)
}

/// Ternary classification symbol of one syndrome value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ternary {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Plus,
}

impl Ternary {
    fn negate(self) -> Self {
        match self {
            Ternary::Minus => Ternary::Plus,
            Ternary::Zero => Ternary::Zero,
            Ternary::Plus => Ternary::Minus,
        }
    }

    fn from_unit(v: i32) -> Self {
        match v.signum() {
            1 => Ternary::Plus,
            -1 => Ternary::Minus,
            _ => Ternary::Zero,
        }
    }
}

impl fmt::Display for Ternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ternary::Minus => "-",
            Ternary::Zero => "0",
            Ternary::Plus => "+",
        })
    }
}

/// A classified four-symbol syndrome signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(pub [Ternary; 4]);

impl Signature {
    pub fn zero() -> Self {
        Signature([Ternary::Zero; 4])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|t| *t == Ternary::Zero)
    }

    pub fn negate(&self) -> Self {
        Signature([
            self.0[0].negate(),
            self.0[1].negate(),
            self.0[2].negate(),
            self.0[3].negate(),
        ])
    }

    /// All 81 signatures, in lexicographic order.
    pub fn all() -> Vec<Signature> {
        let syms = [Ternary::Minus, Ternary::Zero, Ternary::Plus];
        let mut out = Vec::with_capacity(81);
        for a in syms {
            for b in syms {
                for c in syms {
                    for d in syms {
                        out.push(Signature([a, b, c, d]));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.0 {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Signature {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syms: Vec<Ternary> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Ternary::Plus),
                '-' => Ok(Ternary::Minus),
                '0' => Ok(Ternary::Zero),
                _ => Err(CoreError::param("signature", format!("bad symbol {c:?}"))),
            })
            .collect::<Result<_, _>>()?;
        if syms.len() != 4 {
            return Err(CoreError::param("signature", "need exactly 4 symbols"));
        }
        Ok(Signature([syms[0], syms[1], syms[2], syms[3]]))
    }
}

impl Serialize for Signature {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Whether the decoder sees syndrome signs or only their support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignMode {
    /// Full ternary signatures, identified up to a global sign flip
    /// (the displacement amplitude carries an arbitrary sign).
    Sensitive,
    /// Qubit-style parity syndromes: only zero / nonzero is visible.
    Blind,
}

impl SignMode {
    /// Canonical representative of a signature's equivalence class.
    pub fn canonical(self, sig: Signature) -> Signature {
        match self {
            SignMode::Blind => Signature(sig.0.map(|t| {
                if t == Ternary::Zero {
                    Ternary::Zero
                } else {
                    Ternary::Plus
                }
            })),
            SignMode::Sensitive => {
                for t in sig.0 {
                    match t {
                        Ternary::Plus => return sig,
                        Ternary::Minus => return sig.negate(),
                        Ternary::Zero => {}
                    }
                }
                sig
            }
        }
    }
}

/// Classify raw syndrome values against the expected amplitude.
///
/// For eps > 0 a value above `threshold_fraction * eps` is `+`, below the
/// negated threshold is `-`, else `0`; for eps < 0 the symbols mirror.
pub fn classify(raw: &[f64; 4], eps: f64, threshold_fraction: f64) -> Result<Signature, CoreError> {
    if eps == 0.0 {
        return Err(CoreError::param("eps", "expected amplitude must be nonzero"));
    }
    if !(0.0 < threshold_fraction && threshold_fraction < 1.0) {
        return Err(CoreError::param(
            "threshold_fraction",
            "must lie strictly between 0 and 1",
        ));
    }
    let gate = threshold_fraction * eps.abs();
    let mut syms = [Ternary::Zero; 4];
    for (i, &v) in raw.iter().enumerate() {
        let mut t = if v > gate {
            Ternary::Plus
        } else if v < -gate {
            Ternary::Minus
        } else {
            Ternary::Zero
        };
        if eps < 0.0 {
            t = t.negate();
        }
        syms[i] = t;
    }
    Ok(Signature(syms))
}

/// Raw syndrome values together with their classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyndromeVector {
    pub raw: [f64; 4],
    pub classified: Signature,
}

impl SyndromeVector {
    pub fn new(raw: [f64; 4], eps: f64, threshold_fraction: f64) -> Result<Self, CoreError> {
        Ok(Self {
            raw,
            classified: classify(&raw, eps, threshold_fraction)?,
        })
    }
}

/// What the decoder does with a recognized signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionKind {
    /// Error located, protected correlation unaffected.
    NoCorrection,
    /// Feed the given syndrome (1..=4) forward with a plus sign.
    AddSyndrome { index: usize },
    /// Feed the given syndrome (1..=4) forward with a minus sign.
    SubtractSyndrome { index: usize },
    /// Signature claimed by no pattern of weight 0..3.
    Undecodable,
    /// All-zero signature: nothing observed.
    NoDetection,
}

/// A decoded correction with the pattern that explains the signature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionAction {
    pub kind: ActionKind,
    /// Minimal-weight claiming pattern (one-based modes), when one exists.
    pub predicted_pattern: Option<Vec<usize>>,
}

/// A signature claimed by more than one enumerated pattern.
#[derive(Debug, Clone, Serialize)]
pub struct AmbiguityRecord {
    pub signature: Signature,
    pub kept_pattern: Vec<usize>,
    pub kept_weight: usize,
    pub rejected_pattern: Vec<usize>,
    pub rejected_weight: usize,
}

/// Total map from classified signatures to correction actions.
#[derive(Debug, Clone, Serialize)]
pub struct DecoderTable {
    pub protected: (usize, usize),
    pub sign_mode: SignMode,
    /// One entry per raw signature; all 81 resolve.
    pub entries: BTreeMap<Signature, CorrectionAction>,
    pub ambiguities: Vec<AmbiguityRecord>,
}

/// Unit-amplitude syndrome values of a pattern: the coefficient of eps in
/// each of the four auxiliary correlations.
pub fn unit_syndromes(cfg: &ClusterConfig, modes: &BTreeSet<usize>) -> [i32; 4] {
    let pairs = cfg.syndrome_pairs();
    let mut out = [0i32; 4];
    for (k, (i, j)) in pairs.iter().enumerate() {
        out[k] = modes.contains(i) as i32 - modes.contains(j) as i32;
    }
    out
}

/// Unit-amplitude shift of the protected correlation under a pattern.
pub fn unit_protected_effect(cfg: &ClusterConfig, modes: &BTreeSet<usize>) -> i32 {
    let (i, j) = cfg.protected;
    modes.contains(&i) as i32 - modes.contains(&j) as i32
}

fn unit_signature(cfg: &ClusterConfig, modes: &BTreeSet<usize>) -> Signature {
    let s = unit_syndromes(cfg, modes);
    Signature([
        Ternary::from_unit(s[0]),
        Ternary::from_unit(s[1]),
        Ternary::from_unit(s[2]),
        Ternary::from_unit(s[3]),
    ])
}

fn k_subsets(weight: usize) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), 1usize)];
    while let Some((prefix, next)) = stack.pop() {
        if prefix.len() == weight {
            out.push(prefix.iter().copied().collect());
            continue;
        }
        // descending push keeps lexicographic order on pop
        for m in (next..=6).rev() {
            let mut p = prefix.clone();
            p.push(m);
            stack.push((p, m + 1));
        }
    }
    out
}

/// Build the decoder by enumerating patterns of weight 0..3 over modes
/// 1..6, minimal weight first; the first claimant of a signature class
/// wins and later claimants go to the ambiguity log. Weights 4..6 reduce
/// to 2..0 by complement symmetry and are not enumerated.
pub fn build_decoder(cfg: &ClusterConfig, sign_mode: SignMode) -> DecoderTable {
    let mut claimed: BTreeMap<Signature, (Vec<usize>, CorrectionAction)> = BTreeMap::new();
    let mut ambiguities = Vec::new();

    for weight in 0..=3 {
        for modes in k_subsets(weight) {
            let sig = sign_mode.canonical(unit_signature(cfg, &modes));
            let pattern: Vec<usize> = modes.iter().copied().collect();
            if let Some((kept, _)) = claimed.get(&sig) {
                ambiguities.push(AmbiguityRecord {
                    signature: sig,
                    kept_pattern: kept.clone(),
                    kept_weight: kept.len(),
                    rejected_pattern: pattern,
                    rejected_weight: weight,
                });
                continue;
            }
            let effect = unit_protected_effect(cfg, &modes);
            let syndromes = unit_syndromes(cfg, &modes);
            let kind = if weight == 0 {
                ActionKind::NoDetection
            } else if effect == 0 {
                ActionKind::NoCorrection
            } else {
                let mut found = None;
                for (i, &s) in syndromes.iter().enumerate() {
                    if effect + s == 0 {
                        found = Some(ActionKind::AddSyndrome { index: i + 1 });
                        break;
                    }
                    if effect - s == 0 {
                        found = Some(ActionKind::SubtractSyndrome { index: i + 1 });
                        break;
                    }
                }
                // every enumerated pattern that shifts the protected
                // correlation also shifts some syndrome by the same amount
                found.unwrap_or(ActionKind::Undecodable)
            };
            claimed.insert(
                sig,
                (
                    pattern.clone(),
                    CorrectionAction {
                        kind,
                        predicted_pattern: Some(pattern),
                    },
                ),
            );
        }
    }

    // expand the claimed classes to a total map over all 81 signatures
    let mut entries = BTreeMap::new();
    for sig in Signature::all() {
        let canonical = sign_mode.canonical(sig);
        let action = match claimed.get(&canonical) {
            Some((_, action)) => action.clone(),
            None => CorrectionAction {
                kind: ActionKind::Undecodable,
                predicted_pattern: None,
            },
        };
        entries.insert(sig, action);
    }

    DecoderTable {
        protected: cfg.protected,
        sign_mode,
        entries,
        ambiguities,
    }
}

impl DecoderTable {
    /// Look up the action for a classified signature.
    pub fn action(&self, sig: Signature) -> &CorrectionAction {
        self.entries.get(&sig).expect("table is total over 81 signatures")
    }
}

/// Table lookup on a measured syndrome vector.
pub fn decode<'t>(s: &SyndromeVector, table: &'t DecoderTable) -> &'t CorrectionAction {
    table.action(s.classified)
}

/// Apply a feedforward action to the protected correlation record.
pub fn apply_correction(raw_protected: f64, s: &SyndromeVector, action: &CorrectionAction) -> f64 {
    match action.kind {
        ActionKind::AddSyndrome { index } => raw_protected + s.raw[index - 1],
        ActionKind::SubtractSyndrome { index } => raw_protected - s.raw[index - 1],
        _ => raw_protected,
    }
}

/// Analytic variance of the corrected protected combination for a
/// single-error scenario (`error_mode` in 1..=6) or no error (`None`).
///
/// The feedforward makes the corrected observable itself a quadrature
/// combination, so its variance follows from the prepared covariance.
pub fn corrected_variance(cfg: &ClusterConfig, error_mode: Option<usize>) -> Result<f64, CoreError> {
    let state = prepare_cluster(cfg)?;
    let protected = cfg.protected_combination();
    let combo = match error_mode {
        None => protected,
        Some(m) => {
            if m == 0 || m > 6 {
                return Err(CoreError::param("error_mode", "must lie in 1..=6"));
            }
            let table = build_decoder(cfg, SignMode::Sensitive);
            let modes: BTreeSet<usize> = [m].into_iter().collect();
            let sig = SignMode::Sensitive.canonical(unit_signature(cfg, &modes));
            match table.action(sig).kind {
                ActionKind::AddSyndrome { index } => protected.plus(&cfg.syndrome_combination(index)?)?,
                ActionKind::SubtractSyndrome { index } => {
                    protected.minus(&cfg.syndrome_combination(index)?)?
                }
                _ => protected,
            }
        }
    };
    Ok(state.combination_stats(&combo)?.1)
}

/// Full record of one error-correction trial.
#[derive(Debug, Clone, Serialize)]
pub struct TecResult {
    pub pattern: Vec<usize>,
    pub raw_syndromes: [f64; 4],
    pub classified: Signature,
    pub action: ActionKind,
    pub raw_protected: f64,
    pub corrected: f64,
}

impl TecResult {
    /// CSV header matching [`TecResult::csv_row`].
    pub fn csv_header() -> [&'static str; 9] {
        [
            "pattern", "s1", "s2", "s3", "s4", "classified", "action", "raw_protected",
            "corrected",
        ]
    }

    pub fn csv_row(&self) -> [String; 9] {
        let action = match self.action {
            ActionKind::NoCorrection => "none".to_string(),
            ActionKind::AddSyndrome { index } => format!("add_syndrome_{index}"),
            ActionKind::SubtractSyndrome { index } => format!("subtract_syndrome_{index}"),
            ActionKind::Undecodable => "undecodable".to_string(),
            ActionKind::NoDetection => "no_detection".to_string(),
        };
        [
            self.pattern
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join("+"),
            format!("{}", self.raw_syndromes[0]),
            format!("{}", self.raw_syndromes[1]),
            format!("{}", self.raw_syndromes[2]),
            format!("{}", self.raw_syndromes[3]),
            self.classified.to_string(),
            action,
            format!("{}", self.raw_protected),
            format!("{}", self.corrected),
        ]
    }
}

/// Run one full trial: inject the pattern, measure, decode, correct.
pub fn run_trial(
    cfg: &ClusterConfig,
    table: &DecoderTable,
    pattern: &ErrorPattern,
    eps_scale: f64,
    threshold_fraction: f64,
    mode: MeasureMode,
    rng_seed: u64,
) -> Result<TecResult, CoreError> {
    let state = prepare_cluster(cfg)?;
    let (state, _amp) = inject(&state, pattern, rng_seed)?;
    let protected = cfg.protected_combination();
    let (raw, raw_protected) = match mode {
        MeasureMode::Expectation => {
            let raw = measure_syndromes(&state, cfg, mode)?;
            (raw, state.combination_stats(&protected)?.0)
        }
        MeasureMode::Sampled(seed) => {
            // jointly sample syndromes and the protected correlation so the
            // finite-squeezing noise stays correlated across the record
            let mut combos: Vec<QuadratureCombination> = (1..=4)
                .map(|i| cfg.syndrome_combination(i))
                .collect::<Result<_, _>>()?;
            combos.push(protected);
            let draw = state.sample_quadratures(&combos, seed)?;
            ([draw[0], draw[1], draw[2], draw[3]], draw[4])
        }
    };
    let s = SyndromeVector::new(raw, eps_scale, threshold_fraction)?;
    let action = decode(&s, table).clone();
    let corrected = apply_correction(raw_protected, &s, &action);
    Ok(TecResult {
        pattern: pattern.modes().iter().copied().collect(),
        raw_syndromes: raw,
        classified: s.classified,
        action: action.kind,
        raw_protected,
        corrected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const EPS: f64 = 0.8;
    const THRESHOLD: f64 = 0.5;

    fn cfg(r: f64) -> ClusterConfig {
        ClusterConfig::standard(r).unwrap()
    }

    fn fixed(modes: &[usize]) -> ErrorPattern {
        ErrorPattern::new(modes.iter().copied(), AmplitudeModel::Fixed(EPS)).unwrap()
    }

    fn expect_syndromes(modes: &[usize]) -> [f64; 4] {
        let cfg = cfg(0.6);
        let state = prepare_cluster(&cfg).unwrap();
        let (state, _) = inject(&state, &fixed(modes), 0).unwrap();
        measure_syndromes(&state, &cfg, MeasureMode::Expectation).unwrap()
    }

    #[test]
    fn cluster_nullifier_variances() {
        for r in [0.0, 0.345, 1.151] {
            let state = prepare_cluster(&cfg(r)).unwrap();
            let scale = (-2.0 * r).exp() / 4.0;
            let adj = crate::network::reference_adjacency();
            for a in 0..8 {
                let null =
                    QuadratureCombination::nullifier(8, a, &adj.neighbors(a)).unwrap();
                let (_, var) = state.combination_stats(&null).unwrap();
                let expected = if a < 6 { 3.0 * scale } else { 7.0 * scale };
                assert_abs_diff_eq!(var, expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn protected_correlation_variance() {
        for source in [StateSource::FromUnitary, StateSource::FromNetwork] {
            let cfg = ClusterConfig::new(0.576, (5, 6), source).unwrap();
            let state = prepare_cluster(&cfg).unwrap();
            let (_, var) = state
                .combination_stats(&cfg.protected_combination())
                .unwrap();
            assert_abs_diff_eq!(var, (-2.0f64 * 0.576).exp() / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        assert!(ClusterConfig::new(-0.1, (5, 6), StateSource::FromUnitary).is_err());
        assert!(ClusterConfig::new(0.5, (1, 6), StateSource::FromUnitary).is_err());
        let c = cfg(0.5);
        assert_eq!(c.syndrome_pairs(), [(1, 2), (2, 5), (3, 6), (4, 3)]);
    }

    #[test]
    fn inject_single_and_canceling_errors() {
        let cfg = cfg(0.6);
        let state = prepare_cluster(&cfg).unwrap();

        let (unchanged, amp) = inject(&state, &ErrorPattern::empty(), 0).unwrap();
        assert_eq!(amp, 0.0);
        assert_eq!(unchanged.mean(), state.mean());

        // eps on mode 5 drives p2 - p5 to -eps
        let raw = expect_syndromes(&[5]);
        assert_abs_diff_eq!(raw[1], -EPS, epsilon = 1e-12);

        // identical errors on modes 5 and 6 cancel in the protected pair
        let (both, _) = inject(&state, &fixed(&[5, 6]), 0).unwrap();
        let (mean, _) = both
            .combination_stats(&cfg.protected_combination())
            .unwrap();
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn expectation_syndromes_match_tables() {
        assert_eq!(expect_syndromes(&[1]).map(|v| v / EPS), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            expect_syndromes(&[2, 6]).map(|v| (v / EPS).round()),
            [-1.0, 1.0, -1.0, 0.0]
        );
        let raw = expect_syndromes(&[1, 2, 5]);
        for v in raw {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn classify_thresholds() {
        let sig = classify(&[0.9 * EPS, 0.0, 0.0, 0.0], EPS, 0.5).unwrap();
        assert_eq!(sig.to_string(), "+000");
        let sig = classify(&[0.0; 4], EPS, 0.5).unwrap();
        assert!(sig.is_zero());
        let sig = classify(&[-EPS, EPS, -EPS, 0.0], EPS, 0.5).unwrap();
        assert_eq!(sig.to_string(), "-+-0");
        // negative expected amplitude mirrors the symbols
        let sig = classify(&[-EPS, EPS, -EPS, 0.0], -EPS, 0.5).unwrap();
        assert_eq!(sig.to_string(), "+-+0");
        assert!(classify(&[0.0; 4], 0.0, 0.5).is_err());
        assert!(classify(&[0.0; 4], 1.0, 1.5).is_err());
    }

    #[test]
    fn decoder_examples_from_tables() {
        let table = build_decoder(&cfg(0.6), SignMode::Sensitive);

        // mode-5 error: add syndrome 2 (p2 - p5)
        let a = table.action("0-00".parse().unwrap());
        assert_eq!(a.kind, ActionKind::AddSyndrome { index: 2 });
        assert_eq!(a.predicted_pattern.as_deref(), Some(&[5][..]));

        // weight-2 pattern {1,6}
        let a = table.action("+0-0".parse().unwrap());
        assert_eq!(a.predicted_pattern.as_deref(), Some(&[1, 6][..]));
        assert!(matches!(
            a.kind,
            ActionKind::AddSyndrome { .. } | ActionKind::SubtractSyndrome { .. }
        ));

        // weight-3 class {2,4,5}; its sign-flip partner is the complement
        // {1,3,6}, so either is a valid minimal-weight explanation
        let a = table.action("-00+".parse().unwrap());
        let p = a.predicted_pattern.as_deref().unwrap();
        assert!(p == [2, 4, 5] || p == [1, 3, 6], "{p:?}");

        // mode-1 error needs no correction
        let a = table.action("+000".parse().unwrap());
        assert_eq!(a.kind, ActionKind::NoCorrection);

        // mode-6 error: subtract syndrome 3
        let a = table.action("00-0".parse().unwrap());
        assert_eq!(a.kind, ActionKind::SubtractSyndrome { index: 3 });

        // ambiguous class resolves to the single-error interpretation
        let a = table.action("0+00".parse().unwrap());
        assert_eq!(a.predicted_pattern.as_deref(), Some(&[5][..]));
        assert!(table
            .ambiguities
            .iter()
            .any(|rec| rec.rejected_pattern == vec![1, 2]));
    }

    #[test]
    fn in_phase_vs_out_of_phase_distinguished() {
        let table = build_decoder(&cfg(0.6), SignMode::Sensitive);
        let w3 = table.action("+0+0".parse().unwrap());
        let w2 = table.action("+0-0".parse().unwrap());
        assert_eq!(w3.predicted_pattern.as_deref(), Some(&[1, 3, 4][..]));
        assert_eq!(w2.predicted_pattern.as_deref(), Some(&[1, 6][..]));
    }

    #[test]
    fn table_is_total_and_deterministic() {
        let a = build_decoder(&cfg(0.6), SignMode::Sensitive);
        let b = build_decoder(&cfg(0.6), SignMode::Sensitive);
        assert_eq!(a.entries.len(), 81);
        assert_eq!(a.entries, b.entries);
        assert_eq!(a.action(Signature::zero()).kind, ActionKind::NoDetection);
    }

    #[test]
    fn correction_cancels_single_errors() {
        let cfg = cfg(0.8);
        let table = build_decoder(&cfg, SignMode::Sensitive);
        for m in 1..=6 {
            let result = run_trial(
                &cfg,
                &table,
                &fixed(&[m]),
                EPS,
                THRESHOLD,
                MeasureMode::Expectation,
                0,
            )
            .unwrap();
            assert_abs_diff_eq!(result.corrected, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn corrected_variance_matches_no_error() {
        for r in [0.0, 0.345, 0.576, 1.151] {
            let cfg = cfg(r);
            let expected = (-2.0 * r).exp() / 2.0;
            assert_abs_diff_eq!(
                corrected_variance(&cfg, Some(5)).unwrap(),
                expected,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                corrected_variance(&cfg, None).unwrap(),
                expected,
                epsilon = 1e-12
            );
        }
        assert!(corrected_variance(&cfg(0.5), Some(7)).is_err());
    }

    #[test]
    fn nonstandard_protected_pair_machinery() {
        let cfg = ClusterConfig::new(0.6, (1, 2), StateSource::FromUnitary).unwrap();
        let table = build_decoder(&cfg, SignMode::Sensitive);
        assert_eq!(table.entries.len(), 81);

        // mode 2 appears in syndrome (2, 5); its single error is corrected
        let result = run_trial(
            &cfg,
            &table,
            &fixed(&[2]),
            EPS,
            THRESHOLD,
            MeasureMode::Expectation,
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(result.corrected, 0.0, epsilon = 1e-12);

        // mode 1 appears in no syndrome of this pair, so a single error
        // there is invisible: zero signature, residual offset survives
        let result = run_trial(
            &cfg,
            &table,
            &fixed(&[1]),
            EPS,
            THRESHOLD,
            MeasureMode::Expectation,
            0,
        )
        .unwrap();
        assert_eq!(result.action, ActionKind::NoDetection);
        assert_abs_diff_eq!(result.corrected, EPS, epsilon = 1e-12);

        // an error elsewhere is flagged but leaves the correlation intact
        let result = run_trial(
            &cfg,
            &table,
            &fixed(&[5]),
            EPS,
            THRESHOLD,
            MeasureMode::Expectation,
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(result.corrected, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn pattern_validation() {
        assert!(ErrorPattern::new([7], AmplitudeModel::Fixed(1.0)).is_err());
        assert!(ErrorPattern::new([1], AmplitudeModel::Fixed(0.0)).is_err());
        assert!(ErrorPattern::new([1], AmplitudeModel::Gaussian { sigma: 0.0 }).is_err());
    }

    #[test]
    fn gaussian_amplitude_is_shared_and_reproducible() {
        let cfg = cfg(0.6);
        let state = prepare_cluster(&cfg).unwrap();
        let pattern =
            ErrorPattern::new([5, 6], AmplitudeModel::Gaussian { sigma: 0.315f64.sqrt() }).unwrap();
        let (a, amp_a) = inject(&state, &pattern, 11).unwrap();
        let (b, amp_b) = inject(&state, &pattern, 11).unwrap();
        assert_eq!(amp_a, amp_b);
        assert_eq!(a.mean(), b.mean());
        // the identical shared amplitude cancels in p5 - p6
        let (mean, _) = a.combination_stats(&cfg.protected_combination()).unwrap();
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-12);
    }
}
