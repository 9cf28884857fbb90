//! Lightweight per-event signatures (ESign / EVer).
//!
//! Once a vehicle has broadcast a group signature for event `et`, receivers
//! hold its token `T = H1(et)^y` as an event public key. Follow-up messages
//! carry a Schnorr signature `(s_e, c_e)` under that key: two scalars, one
//! exponentiation to sign and two to verify.

use rand::{CryptoRng, RngCore};

use crate::algebra::{G1Element, Scalar};
use crate::error::Error;
use crate::groupsig::{EventId, GroupSignature};
use crate::keys::GroupPublicKey;
use crate::wire::HashItem;

/// `epk = (et, T)`, with the base `H1(et)` cached so neither side rehashes.
///
/// Only built from a group signature; the fields stay private so the base
/// always matches the event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventPublicKey {
    et: EventId,
    base: G1Element,
    token: G1Element,
}

impl EventPublicKey {
    pub fn event(&self) -> &EventId {
        &self.et
    }

    /// `H1(et)`.
    pub fn base(&self) -> &G1Element {
        &self.base
    }

    /// `T`.
    pub fn token(&self) -> &G1Element {
        &self.token
    }
}

/// Extracts the event public key from `σ`. Does not verify `σ`; callers run
/// GVer first.
pub fn epk_from_signature(gpk: &GroupPublicKey, et: &EventId, sigma: &GroupSignature) -> EventPublicKey {
    EventPublicKey {
        et: et.clone(),
        base: gpk.hash_event(et),
        token: sigma.t,
    }
}

/// `σ_e = (s_e, c_e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSignature {
    pub s_e: Scalar,
    pub c_e: Scalar,
}

impl EventSignature {
    pub const SCALAR_COMPONENTS: usize = 2;
}

fn challenge(gpk: &GroupPublicKey, et: &EventId, m_e: &[u8], epk: &EventPublicKey, commitment: &G1Element) -> Scalar {
    gpk.challenge(&[
        HashItem::Event(et),
        HashItem::Bytes(m_e),
        HashItem::EventKey(epk),
        HashItem::G1(commitment),
    ])
}

/// ESign: `R = H1(et)^r`, `c_e = H2(et, m_e, epk, R)`, `s_e = r + y·c_e`.
pub fn esign<R: RngCore + CryptoRng>(
    gpk: &GroupPublicKey,
    usk: &Scalar,
    et: &EventId,
    epk: &EventPublicKey,
    m_e: &[u8],
    rng: &mut R,
) -> Result<EventSignature, Error> {
    let r = Scalar::random(rng)?;
    let commitment = epk.base.pow(&r);
    let c_e = challenge(gpk, et, m_e, epk, &commitment);
    Ok(EventSignature {
        s_e: r + *usk * c_e,
        c_e,
    })
}

/// EVer: recompute `R̃ = H1(et)^(s_e)·T^(−c_e)` and compare challenges.
/// A key registered for a different event is rejected outright.
pub fn ever(gpk: &GroupPublicKey, et: &EventId, epk: &EventPublicKey, m_e: &[u8], sig: &EventSignature) -> bool {
    if epk.et != *et || epk.token.is_identity() {
        return false;
    }
    let commitment = epk.base.pow(&sig.s_e) * epk.token.pow(&-sig.c_e);
    challenge(gpk, et, m_e, epk, &commitment) == sig.c_e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{count_ops, BilinearSuite, OpCounts};
    use crate::enroll::{issue, join_start, GroupSigningKey, MemberId, RegistrationTable};
    use crate::groupsig::{gsign, precompute_context};
    use crate::keys::{gset, ukg};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn setup(seed: u64) -> (GroupPublicKey, GroupSigningKey, ChaCha20Rng) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (gpk, mik, _) = gset(&mut rng, &BilinearSuite::bls12_381()).unwrap();
        let keys = ukg(&mut rng, &gpk).unwrap();
        let (req, state) = join_start(&gpk, &keys, &mut rng).unwrap();
        let resp = issue(&gpk, &mik, &mut RegistrationTable::new(), &MemberId::from("m"), &req, &mut rng).unwrap();
        (gpk.clone(), state.finish(&gpk, &keys, &resp).unwrap(), rng)
    }

    #[test]
    fn round_trip_and_binding() {
        let (gpk, gsk, mut rng) = setup(30);
        let ctx = precompute_context(&gpk, &gsk);
        let e: EventId = "201703011000".parse().unwrap();
        let other: EventId = "201703011010".parse().unwrap();
        let sigma = gsign(&gpk, &gsk, &ctx, &e, b"", &mut rng).unwrap();
        let epk = epk_from_signature(&gpk, &e, &sigma);
        let sig = esign(&gpk, &gsk.y, &e, &epk, b"cam 1", &mut rng).unwrap();
        assert!(ever(&gpk, &e, &epk, b"cam 1", &sig));
        assert!(!ever(&gpk, &e, &epk, b"cam 2", &sig));
        assert!(!ever(&gpk, &other, &epk, b"cam 1", &sig));

        let sigma_other = gsign(&gpk, &gsk, &ctx, &other, b"", &mut rng).unwrap();
        let epk_other = epk_from_signature(&gpk, &other, &sigma_other);
        let moved = esign(&gpk, &gsk.y, &other, &epk_other, b"cam 1", &mut rng).unwrap();
        assert!(!ever(&gpk, &e, &epk, b"cam 1", &moved));

        let tampered = EventSignature {
            s_e: sig.s_e + Scalar::one(),
            ..sig.clone()
        };
        assert!(!ever(&gpk, &e, &epk, b"cam 1", &tampered));
        let tampered = EventSignature {
            c_e: sig.c_e + Scalar::one(),
            ..sig
        };
        assert!(!ever(&gpk, &e, &epk, b"cam 1", &tampered));
    }

    #[test]
    fn wrong_secret_fails() {
        let (gpk, gsk, mut rng) = setup(31);
        let ctx = precompute_context(&gpk, &gsk);
        let e: EventId = "e".parse().unwrap();
        let sigma = gsign(&gpk, &gsk, &ctx, &e, b"", &mut rng).unwrap();
        let epk = epk_from_signature(&gpk, &e, &sigma);
        let sig = esign(&gpk, &(gsk.y + Scalar::one()), &e, &epk, b"m", &mut rng).unwrap();
        assert!(!ever(&gpk, &e, &epk, b"m", &sig));
    }

    #[test]
    fn operation_counts() {
        let (gpk, gsk, mut rng) = setup(32);
        let ctx = precompute_context(&gpk, &gsk);
        let e: EventId = "e".parse().unwrap();
        let sigma = gsign(&gpk, &gsk, &ctx, &e, b"", &mut rng).unwrap();
        let epk = epk_from_signature(&gpk, &e, &sigma);
        let (sig, sign) = count_ops(|| esign(&gpk, &gsk.y, &e, &epk, b"m", &mut rng).unwrap());
        assert_eq!(
            sign,
            OpCounts {
                exp_g1: 1,
                hash_to_scalar: 1,
                ..OpCounts::new()
            }
        );
        let (ok, ver) = count_ops(|| ever(&gpk, &e, &epk, b"m", &sig));
        assert!(ok);
        assert_eq!(
            ver,
            OpCounts {
                mul_g1: 1,
                exp_g1: 2,
                hash_to_scalar: 1,
                ..OpCounts::new()
            }
        );
    }
}
