//! Game oracles, the correctness experiment, and scripted negative suites.
//!
//! [`GameState`] keeps the bookkeeping of the security games (honest and
//! corrupted users, the signing list `SigL`, the challenge list `ChL`, and
//! the per-user key tables) and exposes each oracle as a method. A refused
//! query is an `Err(Refusal)`; `Refusal::Bottom` is the games' `⊥`.
//!
//! [`exp_corr`] runs the correctness experiment against any [`Scheme`];
//! tests substitute deliberately broken schemes to check that each branch
//! of the experiment actually fires.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::algebra::{BilinearSuite, G1Element, Scalar};
use crate::enroll::{
    issue, join_finish, join_start, GroupSigningKey, IssueResponse, JoinRequest, MemberId, RegistrationRow,
    RegistrationTable,
};
use crate::error::Error;
use crate::eventsig::{self, epk_from_signature, EventPublicKey, EventSignature};
use crate::groupsig::{self, precompute_context, EventId, GroupSignature, PairingContext};
use crate::keys::{gset, ukg, GroupPublicKey, MasterIssuingKey, MasterOpeningKey, UserKeyPair};
use crate::linktrace::{self, LinkVerdict, OpenOutcome, TracingProof};

/// Why an oracle refused a query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refusal {
    /// The oracle returns `⊥`.
    Bottom(&'static str),
    /// The experiment aborts.
    Abort(&'static str),
}

pub type OracleResult<T> = Result<T, Refusal>;

/// One `SigL` or `ChL` entry. `sigma` is `None` for the challenge list's
/// placeholder entry of the user that was not chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedEntry {
    pub member: MemberId,
    pub et: EventId,
    pub m: Vec<u8>,
    pub sigma: Option<GroupSignature>,
}

/// Join decision reported by [`GameState::snd_to_u`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinDecision {
    Continue,
    Accept,
    Reject,
}

/// Game bookkeeping. All lists start empty and `sn` starts at 1.
pub struct GameState {
    pub gpk: GroupPublicKey,
    pub mik: MasterIssuingKey,
    pub mok: MasterOpeningKey,
    pub honest: BTreeSet<MemberId>,
    pub corrupted: BTreeSet<MemberId>,
    sig_list: Vec<SignedEntry>,
    pub challenge_list: Vec<SignedEntry>,
    pub upk: HashMap<MemberId, G1Element>,
    pub usk: HashMap<MemberId, Scalar>,
    pub gsk: HashMap<MemberId, GroupSigningKey>,
    pub reg: RegistrationTable,
    join_pending: HashMap<MemberId, UserKeyPair>,
    pub rng: ChaCha20Rng,
}

impl fmt::Debug for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameState")
            .field("honest", &self.honest)
            .field("corrupted", &self.corrupted)
            .field("sn", &self.sn())
            .field("challenge_list", &self.challenge_list.len())
            .finish_non_exhaustive()
    }
}

impl GameState {
    /// GSet plus empty bookkeeping.
    pub fn new(seed: u64) -> Result<Self, Error> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (gpk, mik, mok) = gset(&mut rng, &BilinearSuite::bls12_381())?;
        Ok(GameState {
            gpk,
            mik,
            mok,
            honest: BTreeSet::new(),
            corrupted: BTreeSet::new(),
            sig_list: Vec::new(),
            challenge_list: Vec::new(),
            upk: HashMap::new(),
            usk: HashMap::new(),
            gsk: HashMap::new(),
            reg: RegistrationTable::new(),
            join_pending: HashMap::new(),
            rng,
        })
    }

    /// Index the next successful GSign query will be stored under.
    pub fn sn(&self) -> usize {
        self.sig_list.len() + 1
    }

    /// `SigL[k]` for `k ≥ 1`.
    pub fn sig_list(&self, k: usize) -> Option<&SignedEntry> {
        k.checked_sub(1).and_then(|i| self.sig_list.get(i))
    }

    fn honest_uncorrupted(&self, i: &MemberId) -> bool {
        self.honest.contains(i) && !self.corrupted.contains(i)
    }

    fn in_challenge(&self, i: &MemberId, et: Option<&EventId>) -> bool {
        self.challenge_list
            .iter()
            .any(|e| e.member == *i && et.is_none_or(|et| e.et == *et))
    }

    /// AddU(i): honest user joins with an honest issuer.
    pub fn add_u(&mut self, i: &MemberId) -> OracleResult<G1Element> {
        if self.honest.contains(i) {
            return Err(Refusal::Bottom("i is already an honest user"));
        }
        self.honest.insert(i.clone());
        let keys = ukg(&mut self.rng, &self.gpk).map_err(|_| Refusal::Bottom("randomness failure"))?;
        self.upk.insert(i.clone(), keys.upk);
        self.usk.insert(i.clone(), keys.usk);
        let outcome = join_start(&self.gpk, &keys, &mut self.rng)
            .and_then(|(req, state)| {
                let resp = issue(&self.gpk, &self.mik, &mut self.reg, i, &req, &mut self.rng)?;
                state.finish(&self.gpk, &keys, &resp)
            });
        match outcome {
            Ok(gsk) => {
                self.gsk.insert(i.clone(), gsk);
                Ok(keys.upk)
            }
            Err(_) => Err(Refusal::Bottom("join did not complete")),
        }
    }

    /// USK(i): reveals the user's keys and marks them corrupted.
    pub fn usk(&mut self, i: &MemberId) -> OracleResult<(Option<GroupSigningKey>, Scalar)> {
        if !self.honest_uncorrupted(i) {
            return Err(Refusal::Bottom("i is not an uncorrupted honest user"));
        }
        if self.in_challenge(i, None) {
            return Err(Refusal::Bottom("i appears in the challenge list"));
        }
        self.corrupted.insert(i.clone());
        Ok((self.gsk.get(i).cloned(), self.usk[i]))
    }

    /// GSign(i, et, m).
    pub fn gsign(&mut self, i: &MemberId, et: &EventId, m: &[u8]) -> OracleResult<GroupSignature> {
        if !self.honest.contains(i) {
            return Err(Refusal::Bottom("i is not an honest user"));
        }
        let Some(gsk) = self.gsk.get(i) else {
            return Err(Refusal::Bottom("gsk[i] is undefined"));
        };
        if self.in_challenge(i, Some(et)) {
            return Err(Refusal::Bottom("(i, et) appears in the challenge list"));
        }
        let ctx = precompute_context(&self.gpk, gsk);
        let sigma = groupsig::gsign(&self.gpk, gsk, &ctx, et, m, &mut self.rng)
            .map_err(|_| Refusal::Bottom("randomness failure"))?;
        self.sig_list.push(SignedEntry {
            member: i.clone(),
            et: et.clone(),
            m: m.to_vec(),
            sigma: Some(sigma.clone()),
        });
        Ok(sigma)
    }

    /// RReg(i).
    pub fn rreg(&self, i: &MemberId) -> OracleResult<RegistrationRow> {
        self.reg.get(i).cloned().ok_or(Refusal::Bottom("reg[i] is undefined"))
    }

    /// WReg(i, val). The table still refuses a value whose `A` belongs to
    /// a different member.
    pub fn wreg(&mut self, i: &MemberId, val: RegistrationRow) -> OracleResult<()> {
        self.reg
            .write_row(i.clone(), val)
            .map_err(|_| Refusal::Bottom("A is registered to another member"))
    }

    /// ESign(k, m_e). `k ≥ 1` signs for `SigL[k]`; `k = 0` for the
    /// challenge signature.
    pub fn esign(&mut self, k: usize, m_e: &[u8]) -> OracleResult<EventSignature> {
        let entry = if k >= 1 {
            self.sig_list(k).ok_or(Refusal::Bottom("SigL[k] is undefined"))?
        } else {
            if self.challenge_list.is_empty() {
                return Err(Refusal::Bottom("challenge list is empty"));
            }
            self.challenge_list
                .iter()
                .find(|e| e.sigma.is_some())
                .ok_or(Refusal::Bottom("no challenge signature"))?
        };
        let sigma = entry.sigma.as_ref().expect("entries used here carry a signature");
        let epk = epk_from_signature(&self.gpk, &entry.et, sigma);
        let usk = self.usk[&entry.member];
        let et = entry.et.clone();
        eventsig::esign(&self.gpk, &usk, &et, &epk, m_e, &mut self.rng).map_err(|_| Refusal::Bottom("randomness failure"))
    }

    /// SndToU(i, M_in): the honest user's side of a join run by an
    /// adversarial issuer. `None` starts a fresh join.
    pub fn snd_to_u(
        &mut self,
        i: &MemberId,
        m_in: Option<&IssueResponse>,
    ) -> OracleResult<(Option<JoinRequest>, JoinDecision)> {
        let mut m_in = m_in;
        if !self.honest.contains(i) {
            self.honest.insert(i.clone());
            let keys = ukg(&mut self.rng, &self.gpk).map_err(|_| Refusal::Bottom("randomness failure"))?;
            self.upk.insert(i.clone(), keys.upk);
            self.usk.insert(i.clone(), keys.usk);
            self.gsk.remove(i);
            self.join_pending.insert(i.clone(), keys);
            m_in = None;
        }
        let Some(keys) = self.join_pending.get(i).cloned() else {
            return Ok((None, JoinDecision::Reject));
        };
        match m_in {
            None => {
                let (req, _) =
                    join_start(&self.gpk, &keys, &mut self.rng).map_err(|_| Refusal::Bottom("randomness failure"))?;
                Ok((Some(req), JoinDecision::Continue))
            }
            Some(resp) => match join_finish(&self.gpk, &keys, resp) {
                Ok(gsk) => {
                    self.join_pending.remove(i);
                    self.gsk.insert(i.clone(), gsk);
                    Ok((None, JoinDecision::Accept))
                }
                Err(_) => Ok((None, JoinDecision::Reject)),
            },
        }
    }

    /// Ch_b(i0, i1, et, m).
    pub fn challenge(
        &mut self,
        b: bool,
        i0: &MemberId,
        i1: &MemberId,
        et: &EventId,
        m: &[u8],
    ) -> OracleResult<GroupSignature> {
        if !self.honest_uncorrupted(i0) || !self.honest_uncorrupted(i1) {
            return Err(Refusal::Bottom("challenge users must be uncorrupted honest users"));
        }
        if self.sig_list.iter().any(|e| (e.member == *i0 || e.member == *i1) && e.et == *et) {
            return Err(Refusal::Abort("a challenge user already signed for et"));
        }
        let (chosen, other) = if b { (i1, i0) } else { (i0, i1) };
        let gsk = self.gsk.get(chosen).ok_or(Refusal::Bottom("gsk[i_b] is undefined"))?;
        let ctx = precompute_context(&self.gpk, gsk);
        let sigma = groupsig::gsign(&self.gpk, gsk, &ctx, et, m, &mut self.rng)
            .map_err(|_| Refusal::Bottom("randomness failure"))?;
        self.challenge_list = vec![
            SignedEntry {
                member: chosen.clone(),
                et: et.clone(),
                m: m.to_vec(),
                sigma: Some(sigma.clone()),
            },
            SignedEntry {
                member: other.clone(),
                et: et.clone(),
                m: m.to_vec(),
                sigma: None,
            },
        ];
        Ok(sigma)
    }
}

// ---------------------------------------------------------------------------
// Schemes under test
// ---------------------------------------------------------------------------

/// The algorithms exercised by [`exp_corr`]. Every method defaults to the
/// real implementation; test doubles override one at a time.
pub trait Scheme {
    fn gsign(
        &self,
        gpk: &GroupPublicKey,
        gsk: &GroupSigningKey,
        ctx: &PairingContext,
        et: &EventId,
        m: &[u8],
        rng: &mut ChaCha20Rng,
    ) -> Result<GroupSignature, Error> {
        groupsig::gsign(gpk, gsk, ctx, et, m, rng)
    }

    fn gver(&self, gpk: &GroupPublicKey, et: &EventId, m: &[u8], sigma: &GroupSignature) -> bool {
        groupsig::gver(gpk, et, m, sigma)
    }

    fn open(
        &self,
        gpk: &GroupPublicKey,
        mok: &MasterOpeningKey,
        reg: &RegistrationTable,
        et: &EventId,
        m: &[u8],
        sigma: &GroupSignature,
        rng: &mut ChaCha20Rng,
    ) -> Result<OpenOutcome, Error> {
        linktrace::open(gpk, mok, reg, et, m, sigma, rng)
    }

    fn judge(
        &self,
        gpk: &GroupPublicKey,
        member: &MemberId,
        upk: &G1Element,
        sigma: &GroupSignature,
        proof: &TracingProof,
    ) -> bool {
        linktrace::judge(gpk, member, upk, sigma, proof)
    }

    fn esign(
        &self,
        gpk: &GroupPublicKey,
        usk: &Scalar,
        et: &EventId,
        epk: &EventPublicKey,
        m_e: &[u8],
        rng: &mut ChaCha20Rng,
    ) -> Result<EventSignature, Error> {
        eventsig::esign(gpk, usk, et, epk, m_e, rng)
    }

    fn ever(&self, gpk: &GroupPublicKey, et: &EventId, epk: &EventPublicKey, m_e: &[u8], sig: &EventSignature) -> bool {
        eventsig::ever(gpk, et, epk, m_e, sig)
    }

    fn link(&self, et: &EventId, m0: &[u8], sigma0: &GroupSignature, m1: &[u8], sigma1: &GroupSignature) -> LinkVerdict {
        linktrace::link(et, m0, sigma0, m1, sigma1)
    }
}

/// The library's own algorithms.
#[derive(Clone, Copy, Debug, Default)]
pub struct Honest;

impl Scheme for Honest {}

/// The branch of the correctness experiment that returned 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CorrBranch {
    /// GVer rejected an honest signature.
    Verify,
    /// Open failed or named someone other than the signer.
    OpenIdentity,
    /// Judge rejected the honest opening proof.
    Judge,
    /// Judge accepted the opening proof against another user's key.
    MisAttribution,
    /// EVer rejected an honest event signature.
    EventVerify,
    /// Two signatures by one user for one event were not linked.
    LinkSame,
    /// Signatures by two users for one event were linked.
    LinkDifferent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrFailure {
    pub trial: usize,
    pub branch: CorrBranch,
    pub transcript: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrReport {
    pub trials: usize,
    pub failure: Option<CorrFailure>,
}

impl CorrReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs `trials` independent copies of the correctness experiment, each
/// with a fresh GSet. The scripted adversary enrolls one or two users,
/// picks `i1 = i0` about a third of the time, and draws random events and
/// messages. Stops at the first failing branch.
pub fn exp_corr<S: Scheme>(scheme: &S, trials: usize, seed: u64) -> Result<CorrReport, Error> {
    let mut master = ChaCha20Rng::seed_from_u64(seed);
    for trial in 0..trials {
        if let Some((branch, transcript)) = corr_trial(scheme, master.gen())? {
            return Ok(CorrReport {
                trials: trial + 1,
                failure: Some(CorrFailure {
                    trial,
                    branch,
                    transcript,
                }),
            });
        }
    }
    Ok(CorrReport { trials, failure: None })
}

fn random_bytes(rng: &mut ChaCha20Rng, max: usize) -> Vec<u8> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| rng.gen()).collect()
}

fn corr_trial<S: Scheme>(scheme: &S, seed: u64) -> Result<Option<(CorrBranch, Vec<String>)>, Error> {
    let mut game = GameState::new(seed)?;
    let mut log = vec![format!("seed {seed:#018x}")];

    // Adversary with AddU and RReg.
    let i0 = MemberId::from("i0");
    let same = game.rng.gen_ratio(1, 3);
    let i1 = if same { i0.clone() } else { MemberId::from("i1") };
    game.add_u(&i0).map_err(|_| Error::InvalidCredential)?;
    if !same {
        game.add_u(&i1).map_err(|_| Error::InvalidCredential)?;
    }
    let _ = game.rreg(&i0);
    let et = EventId::new(format!("event-{}", game.rng.gen::<u32>()))?;
    let m0 = random_bytes(&mut game.rng, 32);
    let m1 = random_bytes(&mut game.rng, 32);
    let m_e = random_bytes(&mut game.rng, 32);
    log.push(format!("i0={i0} i1={i1} et={et} |m0|={} |m1|={}", m0.len(), m1.len()));

    let gsk0 = game.gsk[&i0].clone();
    let ctx0 = precompute_context(&game.gpk, &gsk0);
    let sigma0 = scheme.gsign(&game.gpk, &gsk0, &ctx0, &et, &m0, &mut game.rng)?;

    let opened = scheme.open(&game.gpk, &game.mok, &game.reg, &et, &m0, &sigma0, &mut game.rng);
    if !scheme.gver(&game.gpk, &et, &m0, &sigma0) {
        log.push("GVer rejected sigma0".into());
        return Ok(Some((CorrBranch::Verify, log)));
    }
    let (j, proof) = match opened {
        Ok(OpenOutcome::Traced { member, proof }) => (member, proof),
        Ok(OpenOutcome::Untraceable) => {
            log.push("Open returned untraceable".into());
            return Ok(Some((CorrBranch::OpenIdentity, log)));
        }
        Err(e) => {
            log.push(format!("Open failed: {e}"));
            return Ok(Some((CorrBranch::OpenIdentity, log)));
        }
    };
    if j != i0 {
        log.push(format!("Open named {j}"));
        return Ok(Some((CorrBranch::OpenIdentity, log)));
    }
    if !scheme.judge(&game.gpk, &i0, &game.upk[&i0], &sigma0, &proof) {
        log.push("Judge rejected the honest proof".into());
        return Ok(Some((CorrBranch::Judge, log)));
    }
    // Extra branch: the same proof must not convict anyone else.
    let (other, other_upk) = if same {
        let stranger = ukg(&mut game.rng, &game.gpk)?;
        (MemberId::from("stranger"), stranger.upk)
    } else {
        (i1.clone(), game.upk[&i1])
    };
    if scheme.judge(&game.gpk, &other, &other_upk, &sigma0, &proof) {
        log.push(format!("Judge accepted the proof against {other}"));
        return Ok(Some((CorrBranch::MisAttribution, log)));
    }

    let epk0 = epk_from_signature(&game.gpk, &et, &sigma0);
    let sig_e = scheme.esign(&game.gpk, &game.usk[&i0], &et, &epk0, &m_e, &mut game.rng)?;
    if !scheme.ever(&game.gpk, &et, &epk0, &m_e, &sig_e) {
        log.push("EVer rejected the event signature".into());
        return Ok(Some((CorrBranch::EventVerify, log)));
    }

    let gsk1 = game.gsk[&i1].clone();
    let ctx1 = precompute_context(&game.gpk, &gsk1);
    let sigma1 = scheme.gsign(&game.gpk, &gsk1, &ctx1, &et, &m1, &mut game.rng)?;
    let linked = scheme.link(&et, &m0, &sigma0, &m1, &sigma1).linked;
    if same && !linked {
        log.push("same user, not linked".into());
        return Ok(Some((CorrBranch::LinkSame, log)));
    }
    if !same && linked {
        log.push("different users, linked".into());
        return Ok(Some((CorrBranch::LinkDifferent, log)));
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Scripted negative suites
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    /// Scripted attempts made.
    pub cases: usize,
    /// Attempts that reached the experiment's winning condition.
    pub wins: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeReport {
    pub suites: Vec<SuiteResult>,
}

impl NegativeReport {
    pub fn all_held(&self) -> bool {
        self.suites.iter().all(|s| s.wins.is_empty())
    }
}

impl fmt::Display for NegativeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            let status = if s.wins.is_empty() { "held" } else { "BROKEN" };
            writeln!(f, "{:<28} {:>5} cases  {status}", s.name, s.cases)?;
            for w in &s.wins {
                writeln!(f, "    {w}")?;
            }
        }
        Ok(())
    }
}

struct Suite {
    name: &'static str,
    cases: usize,
    wins: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            cases: 0,
            wins: Vec::new(),
        }
    }

    /// Records one attempt; `won` is the experiment's winning condition.
    fn case(&mut self, won: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if won {
            self.wins.push(what());
        }
    }

    fn done(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            wins: self.wins,
        }
    }
}

fn opened(game: &mut GameState, et: &EventId, m: &[u8], sigma: &GroupSignature) -> Option<(MemberId, TracingProof)> {
    match linktrace::open(&game.gpk, &game.mok, &game.reg, et, m, sigma, &mut game.rng) {
        Ok(OpenOutcome::Traced { member, proof }) => Some((member, proof)),
        _ => None,
    }
}

/// Tamper, replay and mix-and-match scripts against the traceability,
/// event-linkability, non-frameability and unforgeability experiments.
/// Each suite asserts the winning condition is never reached.
pub fn negative_suites(seed: u64) -> Result<NegativeReport, Error> {
    let mut game = GameState::new(seed)?;
    let alice = MemberId::from("alice");
    let bob = MemberId::from("bob");
    let carol = MemberId::from("carol");
    for who in [&alice, &bob, &carol] {
        game.add_u(who).map_err(|_| Error::InvalidCredential)?;
    }
    let et = EventId::new("junction-12||201703011000")?;
    let et2 = EventId::new("junction-12||201703011010")?;
    let mut suites = Vec::new();

    // Sybil: one credential, one event, many signatures; all must link.
    let mut s = Suite::new("e-link/sybil");
    let sigs: Vec<(Vec<u8>, GroupSignature)> = (0..50)
        .map(|k| {
            let m = format!("claimed identity {k}").into_bytes();
            game.gsign(&alice, &et, &m).map(|sig| (m, sig))
        })
        .collect::<Result<_, _>>()
        .map_err(|_| Error::InvalidCredential)?;
    for a in 0..sigs.len() {
        for b in a + 1..sigs.len() {
            let linked = linktrace::link(&et, &sigs[a].0, &sigs[a].1, &sigs[b].0, &sigs[b].1).linked;
            s.case(!linked, || format!("signatures {a} and {b} by one member not linked"));
        }
    }
    suites.push(s.done());

    // Link-unforgeability: different members never link; cross-event tokens
    // of one member never link either.
    let mut s = Suite::new("link-unforg/mix");
    let bob_sig = game.gsign(&bob, &et, b"b").map_err(|_| Error::InvalidCredential)?;
    let carol_sig = game.gsign(&carol, &et, b"c").map_err(|_| Error::InvalidCredential)?;
    for (m, sig) in sigs.iter().take(10) {
        s.case(linktrace::link(&et, m, sig, b"b", &bob_sig).linked, || "alice linked to bob".into());
        s.case(linktrace::link(&et, m, sig, b"c", &carol_sig).linked, || "alice linked to carol".into());
    }
    // Splicing alice's token into bob's signature must not verify, so the
    // forged pair never reaches Link.
    let mut spliced = bob_sig.clone();
    spliced.t = sigs[0].1.t;
    s.case(groupsig::gver(&game.gpk, &et, b"b", &spliced), || "spliced token verified".into());
    suites.push(s.done());

    // Traceability: tampered signatures either fail GVer or open to a
    // member whose proof the judge accepts.
    let mut s = Suite::new("trace/tamper");
    let base = sigs[1].1.clone();
    let variants: Vec<(&str, GroupSignature)> = vec![
        ("B from bob", GroupSignature { b: bob_sig.b, ..base.clone() }),
        ("D from bob", GroupSignature { d: bob_sig.d, ..base.clone() }),
        ("D,B from bob", GroupSignature { d: bob_sig.d, b: bob_sig.b, ..base.clone() }),
        ("B·h", GroupSignature { b: base.b * game.gpk.h, ..base.clone() }),
        ("responses from bob", GroupSignature {
            s_x: bob_sig.s_x,
            s_y: bob_sig.s_y,
            ..base.clone()
        }),
    ];
    for (label, sigma) in variants {
        let m = &sigs[1].0;
        if !groupsig::gver(&game.gpk, &et, m, &sigma) {
            s.case(false, String::new);
            continue;
        }
        let won = match opened(&mut game, &et, m, &sigma) {
            None => true,
            Some((i, proof)) => !linktrace::judge(&game.gpk, &i, &game.upk[&i], &sigma, &proof),
        };
        s.case(won, || format!("{label}: valid but untraceable"));
    }
    suites.push(s.done());

    // Non-frameability: an honest proof re-attributed to someone else, or
    // moved onto another signature, must not convince the judge.
    let mut s = Suite::new("gsig-non-frame/reattribute");
    let (owner, proof) = opened(&mut game, &et, b"b", &bob_sig).ok_or(Error::InvalidSignature)?;
    for victim in [&alice, &carol] {
        s.case(linktrace::judge(&game.gpk, victim, &game.upk[victim], &bob_sig, &proof), || {
            format!("bob's signature pinned on {victim}")
        });
    }
    s.case(linktrace::judge(&game.gpk, &owner, &game.upk[&owner], &carol_sig, &proof), || {
        "proof moved to carol's signature".into()
    });
    for _ in 0..20 {
        let victim = if game.rng.gen() { &alice } else { &carol };
        let mut forged = proof.clone();
        forged.x = game.reg.get(victim).map(|r| r.x).unwrap_or(forged.x);
        forged.k = forged.k * G1Element::random(&mut game.rng)?;
        s.case(linktrace::judge(&game.gpk, victim, &game.upk[victim], &bob_sig, &forged), || {
            format!("forged proof against {victim}")
        });
    }
    suites.push(s.done());

    // Event-signature unforgeability: replay across events and messages,
    // and signatures under a key the signer does not own.
    let mut s = Suite::new("esig-unforg/replay");
    let k_alice = 1; // SigL[1] is alice's first Sybil signature.
    let entry = game.sig_list(k_alice).cloned().ok_or(Error::InvalidSignature)?;
    let sigma = entry.sigma.clone().expect("SigL entries carry signatures");
    let epk = epk_from_signature(&game.gpk, &entry.et, &sigma);
    let sig_e = game.esign(k_alice, b"status").map_err(|_| Error::InvalidSignature)?;
    let later = game.gsign(&alice, &et2, b"").map_err(|_| Error::InvalidCredential)?;
    let epk_later = epk_from_signature(&game.gpk, &et2, &later);
    s.case(eventsig::ever(&game.gpk, &et2, &epk_later, b"status", &sig_e), || {
        "replayed into the next event".into()
    });
    s.case(eventsig::ever(&game.gpk, &et2, &epk, b"status", &sig_e), || {
        "accepted with a key from another event".into()
    });
    s.case(eventsig::ever(&game.gpk, &et, &epk, b"status!", &sig_e), || "message changed".into());
    let epk_bob = epk_from_signature(&game.gpk, &et, &bob_sig);
    s.case(eventsig::ever(&game.gpk, &et, &epk_bob, b"status", &sig_e), || {
        "accepted under bob's event key".into()
    });
    let bob_usk = game.usk[&bob];
    let by_bob = eventsig::esign(&game.gpk, &bob_usk, &et, &epk, b"x", &mut game.rng)?;
    s.case(eventsig::ever(&game.gpk, &et, &epk, b"x", &by_bob), || "bob signed under alice's key".into());
    suites.push(s.done());

    Ok(NegativeReport { suites })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> MemberId {
        MemberId::from(s)
    }

    fn et(s: &str) -> EventId {
        s.parse().unwrap()
    }

    #[test]
    fn add_u_guards() {
        let mut g = GameState::new(1).unwrap();
        let upk = g.add_u(&id("a")).unwrap();
        assert_eq!(g.upk[&id("a")], upk);
        assert!(g.gsk[&id("a")].is_valid(&g.gpk));
        assert_eq!(g.add_u(&id("a")), Err(Refusal::Bottom("i is already an honest user")));
    }

    #[test]
    fn usk_guards_and_marks_corrupted() {
        let mut g = GameState::new(2).unwrap();
        assert!(g.usk(&id("a")).is_err());
        g.add_u(&id("a")).unwrap();
        g.add_u(&id("b")).unwrap();
        g.add_u(&id("c")).unwrap();
        let (gsk, y) = g.usk(&id("a")).unwrap();
        assert_eq!(gsk.unwrap().y, y);
        assert!(g.corrupted.contains(&id("a")));
        assert!(g.usk(&id("a")).is_err());
        g.challenge(false, &id("b"), &id("c"), &et("e"), b"m").unwrap();
        // Both challenge users are in ChL, including the placeholder one.
        assert_eq!(g.usk(&id("b")), Err(Refusal::Bottom("i appears in the challenge list")));
        assert_eq!(g.usk(&id("c")), Err(Refusal::Bottom("i appears in the challenge list")));
    }

    #[test]
    fn gsign_guards_and_counter() {
        let mut g = GameState::new(3).unwrap();
        assert_eq!(g.sn(), 1);
        assert_eq!(g.gsign(&id("a"), &et("e"), b"m"), Err(Refusal::Bottom("i is not an honest user")));
        // Honest but still joining: gsk[i] = ⊥.
        g.snd_to_u(&id("j"), None).unwrap();
        assert_eq!(g.gsign(&id("j"), &et("e"), b"m"), Err(Refusal::Bottom("gsk[i] is undefined")));
        assert_eq!(g.sn(), 1);

        g.add_u(&id("a")).unwrap();
        g.add_u(&id("b")).unwrap();
        let sigma = g.gsign(&id("a"), &et("e"), b"m").unwrap();
        assert_eq!(g.sn(), 2);
        assert_eq!(g.sig_list(1).unwrap().sigma.as_ref(), Some(&sigma));
        assert!(g.sig_list(0).is_none());

        g.challenge(true, &id("a"), &id("b"), &et("f"), b"m").unwrap();
        for who in ["a", "b"] {
            assert_eq!(
                g.gsign(&id(who), &et("f"), b"m"),
                Err(Refusal::Bottom("(i, et) appears in the challenge list"))
            );
            g.gsign(&id(who), &et("g"), b"m").unwrap();
        }
        assert_eq!(g.sn(), 4);
    }

    #[test]
    fn registry_oracles() {
        let mut g = GameState::new(4).unwrap();
        assert!(g.rreg(&id("a")).is_err());
        g.add_u(&id("a")).unwrap();
        g.add_u(&id("b")).unwrap();
        let row = g.rreg(&id("a")).unwrap();
        assert_eq!(row.a, g.gsk[&id("a")].a);
        let mut moved = row.clone();
        moved.x = Scalar::from_u64(9);
        g.wreg(&id("a"), moved.clone()).unwrap();
        assert_eq!(g.rreg(&id("a")).unwrap(), moved);
        assert!(g.wreg(&id("b"), row).is_err());
        g.wreg(&id("new"), RegistrationRow {
            x: Scalar::one(),
            a: G1Element::generator(),
            upk: G1Element::generator(),
        })
        .unwrap();
        assert!(g.rreg(&id("new")).is_ok());
    }

    #[test]
    fn esign_oracle_guards() {
        let mut g = GameState::new(5).unwrap();
        assert_eq!(g.esign(1, b"x"), Err(Refusal::Bottom("SigL[k] is undefined")));
        assert_eq!(g.esign(0, b"x"), Err(Refusal::Bottom("challenge list is empty")));
        g.add_u(&id("a")).unwrap();
        g.add_u(&id("b")).unwrap();
        let sigma = g.gsign(&id("a"), &et("e"), b"").unwrap();
        let sig_e = g.esign(1, b"x").unwrap();
        let epk = epk_from_signature(&g.gpk, &et("e"), &sigma);
        assert!(eventsig::ever(&g.gpk, &et("e"), &epk, b"x", &sig_e));
        assert!(g.esign(2, b"x").is_err());

        let star = g.challenge(false, &id("a"), &id("b"), &et("f"), b"").unwrap();
        let sig_e = g.esign(0, b"y").unwrap();
        let epk = epk_from_signature(&g.gpk, &et("f"), &star);
        assert!(eventsig::ever(&g.gpk, &et("f"), &epk, b"y", &sig_e));
    }

    #[test]
    fn snd_to_u_runs_a_join_with_an_external_issuer() {
        let mut g = GameState::new(6).unwrap();
        let (req, dec) = g.snd_to_u(&id("u"), None).unwrap();
        assert_eq!(dec, JoinDecision::Continue);
        let req = req.unwrap();
        assert!(g.honest.contains(&id("u")));
        assert!(!g.gsk.contains_key(&id("u")));

        // A malformed issuer message is rejected and the join stays open.
        let bogus = IssueResponse {
            x: Scalar::one(),
            a: G1Element::generator(),
        };
        assert_eq!(g.snd_to_u(&id("u"), Some(&bogus)).unwrap(), (None, JoinDecision::Reject));

        let mut reg = RegistrationTable::new();
        let mik = g.mik.clone();
        let resp = issue(&g.gpk.clone(), &mik, &mut reg, &id("u"), &req, &mut g.rng).unwrap();
        assert_eq!(g.snd_to_u(&id("u"), Some(&resp)).unwrap(), (None, JoinDecision::Accept));
        assert!(g.gsk[&id("u")].is_valid(&g.gpk));
        // The first message to a new user is ignored.
        let (req, dec) = g.snd_to_u(&id("v"), Some(&resp)).unwrap();
        assert!(req.is_some());
        assert_eq!(dec, JoinDecision::Continue);
    }

    #[test]
    fn challenge_guards() {
        let mut g = GameState::new(7).unwrap();
        g.add_u(&id("a")).unwrap();
        g.add_u(&id("b")).unwrap();
        g.add_u(&id("c")).unwrap();
        g.usk(&id("c")).unwrap();
        assert!(matches!(g.challenge(false, &id("a"), &id("c"), &et("e"), b""), Err(Refusal::Bottom(_))));
        assert!(matches!(g.challenge(false, &id("a"), &id("x"), &et("e"), b""), Err(Refusal::Bottom(_))));
        g.gsign(&id("b"), &et("e"), b"").unwrap();
        assert!(matches!(g.challenge(false, &id("a"), &id("b"), &et("e"), b""), Err(Refusal::Abort(_))));
        let star = g.challenge(true, &id("a"), &id("b"), &et("f"), b"").unwrap();
        assert_eq!(g.challenge_list[0].member, id("b"));
        assert_eq!(g.challenge_list[0].sigma.as_ref(), Some(&star));
        assert_eq!(g.challenge_list[1].sigma, None);
    }

    #[test]
    fn honest_scheme_passes_exp_corr() {
        let report = exp_corr(&Honest, 25, 1).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.trials, 25);
    }

    struct LinksOnD;
    impl Scheme for LinksOnD {
        fn link(&self, _: &EventId, _: &[u8], s0: &GroupSignature, _: &[u8], s1: &GroupSignature) -> LinkVerdict {
            LinkVerdict { linked: s0.d == s1.d }
        }
    }

    struct JudgeSkipsPairing;
    impl Scheme for JudgeSkipsPairing {
        fn judge(&self, gpk: &GroupPublicKey, _: &MemberId, _: &G1Element, sigma: &GroupSignature, pi: &TracingProof) -> bool {
            let u_side = gpk.u.pow(&pi.s) / gpk.h.pow(&pi.c);
            let d_side = sigma.d.pow(&pi.s) / pi.k.pow(&pi.c);
            gpk.challenge(&[
                crate::wire::HashItem::Signature(sigma),
                crate::wire::HashItem::G1(&pi.k),
                crate::wire::HashItem::G1(&u_side),
                crate::wire::HashItem::G1(&d_side),
            ]) == pi.c
        }
    }

    #[test]
    fn mutants_are_caught_on_their_branch() {
        let report = exp_corr(&LinksOnD, 25, 2).unwrap();
        assert_eq!(report.failure.map(|f| f.branch), Some(CorrBranch::LinkSame));
        let report = exp_corr(&JudgeSkipsPairing, 5, 3).unwrap();
        assert_eq!(report.failure.map(|f| f.branch), Some(CorrBranch::MisAttribution));
    }

    #[test]
    fn negative_suites_hold() {
        let report = negative_suites(9).unwrap();
        assert!(report.all_held(), "{report}");
        assert_eq!(report.suites[0].cases, 50 * 49 / 2);
    }
}
