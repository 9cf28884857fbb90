//! Host timing profile: medians over many iterations plus the exact
//! group-operation count of one call.

use std::fmt::{self, Write as _};
use std::hint::black_box;
use std::time::{Duration, Instant};

use aee_core::algebra::{count_ops, BilinearSuite, G1Element, OpCounts, Scalar, SignatureWidths, D224_WIDTHS};
use aee_core::enroll::{issue, join_start, MemberId, RegistrationRow, RegistrationTable};
use aee_core::eventsig::{epk_from_signature, esign, ever};
use aee_core::groupsig::{gsign, gver, precompute_context, EventId, GroupSignature, GroupSigningKey, PairingContext};
use aee_core::keys::{gset, ukg, GroupPublicKey, MasterOpeningKey, UserKeyPair};
use aee_core::linktrace::{judge, link, open, recover_credential, OpenOutcome};
use aee_core::wire::{encode_event_signature, encode_group_signature, event_signature_len, group_signature_len, Mode};
use rand::{CryptoRng, RngCore};

pub const DEFAULT_ITERATIONS: usize = 1000;
pub const MIN_ITERATIONS: usize = 100;
/// Registry size used for Open and for the large Link measurement.
pub const LARGE_REGISTRY: usize = 10_000;
pub const SMALL_REGISTRY: usize = 10;

/// A single comparison is far below timer resolution, so Link samples
/// time this many calls and divide.
const LINK_BATCH: u32 = 1000;

/// Reference operation counts for each row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expected {
    pub mul_g1: u64,
    pub exp_g1: u64,
    pub mul_gt: u64,
    pub exp_gt: u64,
    pub pairings: u64,
}

impl Expected {
    pub fn matches(&self, ops: &OpCounts) -> bool {
        (ops.mul_g1, ops.exp_g1, ops.mul_gt, ops.exp_gt, ops.pairings)
            == (self.mul_g1, self.exp_g1, self.mul_gt, self.exp_gt, self.pairings)
    }
}

pub const EXPECTED_GSIGN: Expected = Expected {
    mul_g1: 3,
    exp_g1: 4,
    mul_gt: 2,
    exp_gt: 3,
    pairings: 0,
};
pub const EXPECTED_GVER: Expected = Expected {
    mul_g1: 6,
    exp_g1: 11,
    mul_gt: 1,
    exp_gt: 0,
    pairings: 2,
};
pub const EXPECTED_ESIGN: Expected = Expected {
    mul_g1: 0,
    exp_g1: 1,
    mul_gt: 0,
    exp_gt: 0,
    pairings: 0,
};
pub const EXPECTED_EVER: Expected = Expected {
    mul_g1: 1,
    exp_g1: 2,
    mul_gt: 0,
    exp_gt: 0,
    pairings: 0,
};

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub name: &'static str,
    pub median: Duration,
    pub ops: OpCounts,
    pub expected: Option<Expected>,
}

impl BenchRow {
    pub fn ops_match(&self) -> Option<bool> {
        self.expected.map(|e| e.matches(&self.ops))
    }
}

/// Encoded sizes next to the d224 reference widths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeRow {
    pub name: &'static str,
    pub backend: usize,
    pub d224: usize,
}

#[derive(Clone, Debug)]
pub struct Ratio {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    /// `value < bound` rather than `value <= bound`.
    pub strict: bool,
}

impl Ratio {
    pub fn holds(&self) -> bool {
        if self.strict {
            self.value < self.bound
        } else {
            self.value <= self.bound
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub iterations: usize,
    pub rows: Vec<BenchRow>,
    pub link_small: Duration,
    pub link_large: Duration,
    pub sizes: Vec<SizeRow>,
}

impl BenchReport {
    pub fn row(&self, name: &str) -> &BenchRow {
        self.rows.iter().find(|r| r.name == name).expect("known row")
    }

    pub fn median(&self, name: &str) -> Duration {
        self.row(name).median
    }

    /// The host ratios checked against the reference profile.
    pub fn ratios(&self) -> Vec<Ratio> {
        let r = |a: &str, b: &str| self.median(a).as_secs_f64() / self.median(b).as_secs_f64();
        let link_scaling = self.link_large.as_secs_f64() / self.link_small.as_secs_f64();
        vec![
            Ratio {
                name: "ESign/GSign",
                value: r("ESign", "GSign"),
                bound: 0.2,
                strict: false,
            },
            Ratio {
                name: "EVer/GVer",
                value: r("EVer", "GVer"),
                bound: 0.2,
                strict: false,
            },
            Ratio {
                name: "Link/GVer",
                value: r("Link", "GVer"),
                bound: 0.01,
                strict: true,
            },
            Ratio {
                name: "Open/GVer",
                value: r("Open", "GVer"),
                bound: 0.01,
                strict: true,
            },
            Ratio {
                name: "Link 10^4/10 members",
                value: link_scaling.max(1.0 / link_scaling),
                bound: 2.0,
                strict: false,
            },
        ]
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let _ = writeln!(out, "iterations {}", self.iterations);
        let _ = writeln!(
            out,
            "{:<14} {:>11}  {:>6} {:>6} {:>6} {:>6} {:>5} {:>3}  ops vs reference",
            "operation", "median ms", "mulG1", "expG1", "mulGT", "expGT", "pair", "H"
        );
        for row in &self.rows {
            let o = &row.ops;
            let verdict = match (row.expected, row.ops_match()) {
                (Some(e), Some(true)) => format!("match ({}M+{}E, {}Mt+{}Et, {}P)", e.mul_g1, e.exp_g1, e.mul_gt, e.exp_gt, e.pairings),
                (Some(e), _) => format!(
                    "DIFFERS: reference {}M+{}E, {}Mt+{}Et, {}P",
                    e.mul_g1, e.exp_g1, e.mul_gt, e.exp_gt, e.pairings
                ),
                (None, _) => "-".to_string(),
            };
            let _ = writeln!(
                out,
                "{:<14} {:>11.4}  {:>6} {:>6} {:>6} {:>6} {:>5} {:>3}  {verdict}",
                row.name,
                ms(row.median),
                o.mul_g1,
                o.exp_g1,
                o.mul_gt,
                o.exp_gt,
                o.pairings,
                o.hash_to_g1 + o.hash_to_scalar
            );
        }
        let _ = writeln!(
            out,
            "link median   {:.6} ms at {} members, {:.6} ms at {} members",
            ms(self.link_small),
            SMALL_REGISTRY,
            ms(self.link_large),
            LARGE_REGISTRY
        );
        for ratio in self.ratios() {
            let _ = writeln!(
                out,
                "ratio {:<22} {:>10.5}  bound {}{:<6} {}",
                ratio.name,
                ratio.value,
                if ratio.strict { "<" } else { "<=" },
                ratio.bound,
                if ratio.holds() { "ok" } else { "EXCEEDED" }
            );
        }
        let _ = writeln!(out, "{:<24} {:>8} {:>8} {:>10}", "size (bytes)", "backend", "d224", "deviation");
        for s in &self.sizes {
            let _ = writeln!(
                out,
                "{:<24} {:>8} {:>8} {:>+10}",
                s.name,
                s.backend,
                s.d224,
                s.backend as i64 - s.d224 as i64
            );
        }
        f.write_str(&out)
    }
}

pub fn median(samples: &mut [Duration]) -> Duration {
    assert!(!samples.is_empty());
    samples.sort_unstable();
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2
    }
}

/// A group with one genuinely enrolled signer.
pub struct Fixture {
    pub gpk: GroupPublicKey,
    pub mok: MasterOpeningKey,
    pub keys: UserKeyPair,
    pub gsk: GroupSigningKey,
    pub ctx: PairingContext,
    pub member: MemberId,
    pub reg: RegistrationTable,
}

impl Fixture {
    pub fn new<R: RngCore + CryptoRng>(rng: &mut R) -> Result<Self, aee_core::Error> {
        let (gpk, mik, mok) = gset(rng, &BilinearSuite::bls12_381())?;
        let keys = ukg(rng, &gpk)?;
        let (req, state) = join_start(&gpk, &keys, rng)?;
        let member = MemberId::from("bench-signer");
        let mut reg = RegistrationTable::new();
        let resp = issue(&gpk, &mik, &mut reg, &member, &req, rng)?;
        let gsk = state.finish(&gpk, &keys, &resp)?;
        let ctx = precompute_context(&gpk, &gsk);
        Ok(Fixture {
            gpk,
            mok,
            keys,
            gsk,
            ctx,
            member,
            reg,
        })
    }

    /// Pads the registry to `members` rows. The extra rows carry random
    /// credentials: lookup cost depends only on the table, not on whether
    /// the rows went through Join.
    pub fn fill_registry<R: RngCore + CryptoRng>(&mut self, members: usize, rng: &mut R) -> Result<(), aee_core::Error> {
        let mut i = self.reg.len();
        while self.reg.len() < members {
            let row = RegistrationRow {
                x: Scalar::random(rng)?,
                a: G1Element::random(rng)?,
                upk: G1Element::random(rng)?,
            };
            self.reg.insert(MemberId::new(format!("filler-{i:05}")), row)?;
            i += 1;
        }
        Ok(())
    }
}

/// A signer plus two signatures of theirs for one event, in a registry of
/// `members` rows.
fn link_fixture<R: RngCore + CryptoRng>(
    members: usize,
    rng: &mut R,
) -> Result<(EventId, GroupSignature, GroupSignature), aee_core::Error> {
    let mut fx = Fixture::new(rng)?;
    fx.fill_registry(members, rng)?;
    let et: EventId = "bench-link".parse()?;
    let s0 = gsign(&fx.gpk, &fx.gsk, &fx.ctx, &et, b"a", rng)?;
    let s1 = gsign(&fx.gpk, &fx.gsk, &fx.ctx, &et, b"b", rng)?;
    Ok((et, s0, s1))
}

fn time_link_batch(et: &EventId, s0: &GroupSignature, s1: &GroupSignature) -> Duration {
    let start = Instant::now();
    for _ in 0..LINK_BATCH {
        black_box(link(black_box(et), b"a", black_box(s0), b"b", black_box(s1)));
    }
    start.elapsed() / LINK_BATCH
}

fn time_once<T>(f: impl FnOnce() -> T) -> Duration {
    let start = Instant::now();
    black_box(f());
    start.elapsed()
}

pub fn sizes(widths: &SignatureWidths) -> (usize, usize, usize) {
    (
        group_signature_len(widths, Mode::Full),
        group_signature_len(widths, Mode::Compressed),
        event_signature_len(widths),
    )
}

/// Runs the whole profile. `iterations` below [`MIN_ITERATIONS`] is raised
/// to it.
pub fn run<R: RngCore + CryptoRng>(iterations: usize, rng: &mut R) -> Result<BenchReport, aee_core::Error> {
    let iterations = iterations.max(MIN_ITERATIONS);
    let mut fx = Fixture::new(rng)?;
    fx.fill_registry(LARGE_REGISTRY, rng)?;
    let et: EventId = "201703011000".parse()?;
    let m = b"bench message".as_slice();

    let (sigma, gsign_ops) = count_ops(|| gsign(&fx.gpk, &fx.gsk, &fx.ctx, &et, m, rng));
    let sigma = sigma?;
    let (ok, gver_ops) = count_ops(|| gver(&fx.gpk, &et, m, &sigma));
    assert!(ok, "fresh signature verifies");
    let epk = epk_from_signature(&fx.gpk, &et, &sigma);
    let (esig, esign_ops) = count_ops(|| esign(&fx.gpk, &fx.keys.usk, &et, &epk, m, rng));
    let esig = esig?;
    let (_, ever_ops) = count_ops(|| ever(&fx.gpk, &et, &epk, m, &esig));
    let (_, link_ops) = count_ops(|| link(&et, m, &sigma, m, &sigma));
    let (_, open_ops) = count_ops(|| fx.reg.lookup_by_a(&recover_credential(&fx.mok, &sigma)).cloned());
    let (traced, full_open_ops) = count_ops(|| open(&fx.gpk, &fx.mok, &fx.reg, &et, m, &sigma, rng));
    let OpenOutcome::Traced { member, proof } = traced? else {
        panic!("bench signer is registered");
    };
    assert_eq!(member, fx.member);
    let upk = fx.keys.upk;
    let (_, judge_ops) = count_ops(|| judge(&fx.gpk, &member, &upk, &sigma, &proof));

    // Every iteration times each operation once, so drifts in host speed
    // touch all rows alike instead of skewing whichever ran during them.
    let small = link_fixture(SMALL_REGISTRY, rng)?;
    let large = link_fixture(LARGE_REGISTRY, rng)?;
    let mut samples: [Vec<Duration>; 9] = Default::default();
    for _ in 0..iterations {
        let timed = [
            time_once(|| gsign(&fx.gpk, &fx.gsk, &fx.ctx, &et, m, rng)),
            time_once(|| gver(&fx.gpk, &et, m, &sigma)),
            time_once(|| esign(&fx.gpk, &fx.keys.usk, &et, &epk, m, rng)),
            time_once(|| ever(&fx.gpk, &et, &epk, m, &esig)),
            time_once(|| fx.reg.lookup_by_a(&recover_credential(&fx.mok, &sigma)).is_some()),
            time_once(|| open(&fx.gpk, &fx.mok, &fx.reg, &et, m, &sigma, rng)),
            time_once(|| judge(&fx.gpk, &member, &upk, &sigma, &proof)),
            time_link_batch(&large.0, &large.1, &large.2),
            time_link_batch(&small.0, &small.1, &small.2),
        ];
        for (bucket, t) in samples.iter_mut().zip(timed) {
            bucket.push(t);
        }
    }
    let [gsign_median, gver_median, esign_median, ever_median, open_median, full_open_median, judge_median, link_large, link_small] =
        samples.map(|mut v| median(&mut v));

    let rows = vec![
        BenchRow {
            name: "GSign",
            median: gsign_median,
            ops: gsign_ops,
            expected: Some(EXPECTED_GSIGN),
        },
        BenchRow {
            name: "GVer",
            median: gver_median,
            ops: gver_ops,
            expected: Some(EXPECTED_GVER),
        },
        BenchRow {
            name: "ESign",
            median: esign_median,
            ops: esign_ops,
            expected: Some(EXPECTED_ESIGN),
        },
        BenchRow {
            name: "EVer",
            median: ever_median,
            ops: ever_ops,
            expected: Some(EXPECTED_EVER),
        },
        BenchRow {
            name: "Link",
            median: link_large,
            ops: link_ops,
            expected: None,
        },
        BenchRow {
            name: "Open",
            median: open_median,
            ops: open_ops,
            expected: None,
        },
        BenchRow {
            name: "Open+proof",
            median: full_open_median,
            ops: full_open_ops,
            expected: None,
        },
        BenchRow {
            name: "Judge",
            median: judge_median,
            ops: judge_ops,
            expected: None,
        },
    ];

    let widths = BilinearSuite::bls12_381().widths;
    let (full, compressed, event) = sizes(&widths);
    let (d_full, d_compressed, d_event) = sizes(&D224_WIDTHS);
    debug_assert_eq!(encode_group_signature(&sigma, Mode::Full).len(), full);
    debug_assert_eq!(encode_group_signature(&sigma, Mode::Compressed).len(), compressed);
    debug_assert_eq!(encode_event_signature(&esig).len(), event);
    let sizes = vec![
        SizeRow {
            name: "group signature (full)",
            backend: full,
            d224: d_full,
        },
        SizeRow {
            name: "group signature (comp.)",
            backend: compressed,
            d224: d_compressed,
        },
        SizeRow {
            name: "event signature",
            backend: event,
            d224: d_event,
        },
    ];

    Ok(BenchReport {
        iterations,
        rows,
        link_small,
        link_large,
        sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even_samples() {
        let d = Duration::from_micros;
        assert_eq!(median(&mut [d(3), d(1), d(2)]), d(2));
        assert_eq!(median(&mut [d(4), d(1), d(2), d(3)]), Duration::from_nanos(2500));
    }

    #[test]
    fn size_table_deviation() {
        assert_eq!(sizes(&D224_WIDTHS), (308, 227, 56));
        assert_eq!(sizes(&BilinearSuite::bls12_381().widths), (448, 304, 64));
    }
}
