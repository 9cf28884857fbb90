//! Linking by event token, opening, and public judging of opening proofs.

use rand::{CryptoRng, RngCore};

use crate::algebra::{pairing, G1Element, Scalar};
use crate::enroll::{MemberId, RegistrationTable};
use crate::error::Error;
use crate::groupsig::{gver, EventId, GroupSignature};
use crate::keys::{GroupPublicKey, MasterOpeningKey};
use crate::wire::HashItem;

/// `π = (K, s, c, x)` with `K = D^ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracingProof {
    pub k: G1Element,
    pub s: Scalar,
    pub c: Scalar,
    pub x: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinkVerdict {
    pub linked: bool,
}

/// Link: `linked` iff both signatures carry the same token.
///
/// Only the tokens reach the comparison. Callers are expected to have
/// verified both signatures for `et`; the messages play no part.
pub fn link(_et: &EventId, _m0: &[u8], sigma0: &GroupSignature, _m1: &[u8], sigma1: &GroupSignature) -> LinkVerdict {
    link_tokens(sigma0.token(), sigma1.token())
}

/// Token comparison behind [`link`].
pub fn link_tokens(t0: &G1Element, t1: &G1Element) -> LinkVerdict {
    LinkVerdict { linked: t0 == t1 }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpenOutcome {
    Traced { member: MemberId, proof: TracingProof },
    /// The recovered `A` belongs to no registered member.
    Untraceable,
}

/// `A = B·D^(−ξ)`.
pub fn recover_credential(mok: &MasterOpeningKey, sigma: &GroupSignature) -> G1Element {
    sigma.b / sigma.d.pow(&mok.xi)
}

fn proof_challenge(
    gpk: &GroupPublicKey,
    sigma: &GroupSignature,
    k: &G1Element,
    u_side: &G1Element,
    d_side: &G1Element,
) -> Scalar {
    gpk.challenge(&[
        HashItem::Signature(sigma),
        HashItem::G1(k),
        HashItem::G1(u_side),
        HashItem::G1(d_side),
    ])
}

/// Open: verifies `σ`, recovers `A`, finds its owner and proves that `K = D^ξ`
/// uses the same `ξ` as `h = u^ξ`.
pub fn open<R: RngCore + CryptoRng>(
    gpk: &GroupPublicKey,
    mok: &MasterOpeningKey,
    reg: &RegistrationTable,
    et: &EventId,
    m: &[u8],
    sigma: &GroupSignature,
    rng: &mut R,
) -> Result<OpenOutcome, Error> {
    if !gver(gpk, et, m, sigma) {
        return Err(Error::InvalidSignature);
    }
    let a = recover_credential(mok, sigma);
    let Some(member) = reg.lookup_by_a(&a) else {
        return Ok(OpenOutcome::Untraceable);
    };
    let row = reg.get(member).expect("index points at an existing row");

    let r = Scalar::random(rng)?;
    let k = sigma.d.pow(&mok.xi);
    let c = proof_challenge(gpk, sigma, &k, &gpk.u.pow(&r), &sigma.d.pow(&r));
    let proof = TracingProof {
        k,
        s: r + mok.xi * c,
        c,
        x: row.x,
    };
    Ok(OpenOutcome::Traced {
        member: member.clone(),
        proof,
    })
}

/// Judge: accepts iff `c = H2(σ, K, u^s·h^(−c), D^s·K^(−c))` and
/// `ê(B·K⁻¹, w·g2^x) = ê(g1·z⁻¹, g2)` with `z = upk`.
///
/// `member` only names the accused; the proof is bound to them through `upk`.
pub fn judge(
    gpk: &GroupPublicKey,
    member: &MemberId,
    upk: &G1Element,
    sigma: &GroupSignature,
    proof: &TracingProof,
) -> bool {
    let _ = member;
    let u_side = gpk.u.pow(&proof.s) / gpk.h.pow(&proof.c);
    let d_side = sigma.d.pow(&proof.s) / proof.k.pow(&proof.c);
    if proof_challenge(gpk, sigma, &proof.k, &u_side, &d_side) != proof.c {
        return false;
    }
    let a = sigma.b / proof.k;
    pairing(&a, &(gpk.w * gpk.g2.pow(&proof.x))) == pairing(&(gpk.g1 / *upk), &gpk.g2)
}

/// One call to [`Opener::open`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditEntry {
    pub seq: u64,
    pub event: EventId,
    pub outcome: AuditOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuditOutcome {
    Traced(MemberId),
    Untraceable,
    Rejected,
}

/// Opening authority that records every request in an append-only log.
#[derive(Debug)]
pub struct Opener {
    gpk: GroupPublicKey,
    mok: MasterOpeningKey,
    log: Vec<AuditEntry>,
}

impl Opener {
    pub fn new(gpk: GroupPublicKey, mok: MasterOpeningKey) -> Result<Self, Error> {
        if !mok.matches(&gpk) {
            return Err(Error::KeyMismatch("opening key does not match h = u^ξ"));
        }
        Ok(Opener {
            gpk,
            mok,
            log: Vec::new(),
        })
    }

    pub fn open<R: RngCore + CryptoRng>(
        &mut self,
        reg: &RegistrationTable,
        et: &EventId,
        m: &[u8],
        sigma: &GroupSignature,
        rng: &mut R,
    ) -> Result<OpenOutcome, Error> {
        let result = open(&self.gpk, &self.mok, reg, et, m, sigma, rng);
        let outcome = match &result {
            Ok(OpenOutcome::Traced { member, .. }) => AuditOutcome::Traced(member.clone()),
            Ok(OpenOutcome::Untraceable) => AuditOutcome::Untraceable,
            Err(_) => AuditOutcome::Rejected,
        };
        self.log.push(AuditEntry {
            seq: self.log.len() as u64,
            event: et.clone(),
            outcome,
        });
        result
    }

    pub fn audit_log(&self) -> &[AuditEntry] {
        &self.log
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BilinearSuite;
    use crate::enroll::{issue, join_start, GroupSigningKey};
    use crate::groupsig::{gsign, precompute_context};
    use crate::keys::{gset, ukg, MasterIssuingKey, UserKeyPair};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    struct World {
        gpk: GroupPublicKey,
        mik: MasterIssuingKey,
        mok: MasterOpeningKey,
        reg: RegistrationTable,
        members: Vec<(MemberId, UserKeyPair, GroupSigningKey)>,
        rng: ChaCha20Rng,
    }

    impl World {
        fn new(seed: u64, n: usize) -> Self {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let (gpk, mik, mok) = gset(&mut rng, &BilinearSuite::bls12_381()).unwrap();
            let mut w = World {
                gpk,
                mik,
                mok,
                reg: RegistrationTable::new(),
                members: Vec::new(),
                rng,
            };
            for i in 0..n {
                w.enroll(&format!("veh-{i}"));
            }
            w
        }

        fn enroll(&mut self, id: &str) {
            let keys = ukg(&mut self.rng, &self.gpk).unwrap();
            let (req, state) = join_start(&self.gpk, &keys, &mut self.rng).unwrap();
            let id = MemberId::from(id);
            let resp = issue(&self.gpk, &self.mik, &mut self.reg, &id, &req, &mut self.rng).unwrap();
            let gsk = state.finish(&self.gpk, &keys, &resp).unwrap();
            self.members.push((id, keys, gsk));
        }

        fn sign(&mut self, who: usize, et: &EventId, m: &[u8]) -> GroupSignature {
            let gsk = &self.members[who].2;
            let ctx = precompute_context(&self.gpk, gsk);
            gsign(&self.gpk, gsk, &ctx, et, m, &mut self.rng).unwrap()
        }
    }

    fn et(s: &str) -> EventId {
        s.parse().unwrap()
    }

    #[test]
    fn open_finds_signer_and_judge_accepts() {
        let mut w = World::new(40, 3);
        let e = et("201703011000");
        for who in 0..3 {
            let sigma = w.sign(who, &e, b"m");
            let outcome = open(&w.gpk, &w.mok, &w.reg, &e, b"m", &sigma, &mut w.rng).unwrap();
            let OpenOutcome::Traced { member, proof } = outcome else {
                panic!("untraceable");
            };
            assert_eq!(member, w.members[who].0);
            assert_eq!(proof.k, sigma.d.pow(&w.mok.xi));
            assert!(judge(&w.gpk, &member, &w.members[who].1.upk, &sigma, &proof));
            let other = (who + 1) % 3;
            assert!(!judge(&w.gpk, &w.members[other].0, &w.members[other].1.upk, &sigma, &proof));
        }
    }

    #[test]
    fn open_rejects_invalid_and_reports_untraceable() {
        let mut w = World::new(41, 1);
        let e = et("e");
        let sigma = w.sign(0, &e, b"m");
        let mut bad = sigma.clone();
        bad.b = bad.b * G1Element::random(&mut w.rng).unwrap();
        assert!(matches!(
            open(&w.gpk, &w.mok, &w.reg, &e, b"m", &bad, &mut w.rng),
            Err(Error::InvalidSignature)
        ));
        let empty = RegistrationTable::new();
        assert_eq!(
            open(&w.gpk, &w.mok, &empty, &e, b"m", &sigma, &mut w.rng).unwrap(),
            OpenOutcome::Untraceable
        );
    }

    #[test]
    fn link_follows_tokens() {
        let mut w = World::new(42, 2);
        let e = et("e");
        let a0 = w.sign(0, &e, b"x");
        let a1 = w.sign(0, &e, b"y");
        let b0 = w.sign(1, &e, b"x");
        let a_later = w.sign(0, &et("f"), b"x");
        assert!(link(&e, b"x", &a0, b"x", &a0).linked);
        assert!(link(&e, b"x", &a0, b"y", &a1).linked);
        assert!(!link(&e, b"x", &a0, b"x", &b0).linked);
        assert!(!link_tokens(a0.token(), a_later.token()).linked);
    }

    #[test]
    fn judge_rejects_single_field_changes() {
        let mut w = World::new(43, 2);
        let e = et("e");
        let sigma = w.sign(0, &e, b"m");
        let OpenOutcome::Traced { member, proof } = open(&w.gpk, &w.mok, &w.reg, &e, b"m", &sigma, &mut w.rng).unwrap()
        else {
            panic!("untraceable");
        };
        let upk = w.members[0].1.upk;
        for _ in 0..50 {
            let delta = Scalar::random(&mut w.rng).unwrap();
            let mut bad = proof.clone();
            match w.rng.gen_range(0..4) {
                0 => bad.x = bad.x + delta,
                1 => bad.k = bad.k * G1Element::random(&mut w.rng).unwrap(),
                2 => bad.s = bad.s + delta,
                _ => bad.c = bad.c + delta,
            }
            assert!(!judge(&w.gpk, &member, &upk, &sigma, &bad));
        }
        // A different opening key produces K = D^ξ' and must not convince.
        let xi2 = Scalar::random(&mut w.rng).unwrap();
        let forged = TracingProof {
            k: sigma.d.pow(&xi2),
            ..proof
        };
        assert!(!judge(&w.gpk, &member, &upk, &sigma, &forged));
    }

    #[test]
    fn opener_logs_every_request() {
        let mut w = World::new(44, 1);
        let e = et("e");
        let sigma = w.sign(0, &e, b"m");
        let mut opener = Opener::new(w.gpk.clone(), w.mok.clone()).unwrap();
        opener.open(&w.reg, &e, b"m", &sigma, &mut w.rng).unwrap();
        let _ = opener.open(&w.reg, &e, b"other", &sigma, &mut w.rng);
        opener.open(&RegistrationTable::new(), &e, b"m", &sigma, &mut w.rng).unwrap();
        let log: Vec<_> = opener.audit_log().iter().map(|a| (a.seq, a.outcome.clone())).collect();
        assert_eq!(
            log,
            vec![
                (0, AuditOutcome::Traced(w.members[0].0.clone())),
                (1, AuditOutcome::Rejected),
                (2, AuditOutcome::Untraceable),
            ]
        );
        let wrong = MasterOpeningKey { xi: Scalar::from_u64(2) };
        assert!(Opener::new(w.gpk.clone(), wrong).is_err());
    }
}
