//! System initialisation and long-term OBU key generation.

use std::fmt;

use rand::{CryptoRng, RngCore};

use crate::algebra::{
    hash_to_g1, hash_to_scalar, BilinearSuite, G1Element, G2Element, Scalar, H1_TAG, H2_TAG,
};
use crate::error::Error;
use crate::groupsig::EventId;
use crate::wire::HashItem;

/// `gpk = (g1, h, u, H1, H2, g2, w)`. The hash functions are identified by
/// their domain-separation tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPublicKey {
    pub g1: G1Element,
    pub h: G1Element,
    pub u: G1Element,
    pub g2: G2Element,
    pub w: G2Element,
    pub h1_tag: Vec<u8>,
    pub h2_tag: Vec<u8>,
}

impl GroupPublicKey {
    /// Structural validity: every element is a non-identity member of its
    /// prime-order subgroup and the hash tags are usable.
    ///
    /// Elements decoded from the wire are already subgroup-checked; the
    /// explicit order check here covers keys assembled in memory.
    pub fn validate(&self) -> Result<(), Error> {
        let g1s = [(&self.g1, "g1"), (&self.h, "h"), (&self.u, "u")];
        for (p, name) in g1s {
            if p.is_identity() {
                return Err(Error::InvalidGroupKey(name));
            }
            if !p.order_divides_p() {
                return Err(Error::InvalidGroupKey("G1 element outside the prime-order subgroup"));
            }
        }
        for (q, name) in [(&self.g2, "g2"), (&self.w, "w")] {
            if q.is_identity() {
                return Err(Error::InvalidGroupKey(name));
            }
            if !q.order_divides_p() {
                return Err(Error::InvalidGroupKey("G2 element outside the prime-order subgroup"));
            }
        }
        if self.h1_tag.is_empty() || self.h2_tag.is_empty() {
            return Err(Error::InvalidGroupKey("empty hash domain tag"));
        }
        Ok(())
    }

    /// H1(et).
    pub fn hash_event(&self, et: &EventId) -> G1Element {
        hash_to_g1(&self.h1_tag, et.as_bytes())
    }

    /// H2(items).
    pub fn challenge(&self, items: &[HashItem<'_>]) -> Scalar {
        hash_to_scalar(&self.h2_tag, items)
    }
}

/// `mik = γ`, held by the issuer.
#[derive(Clone, PartialEq, Eq)]
pub struct MasterIssuingKey {
    pub gamma: Scalar,
}

impl MasterIssuingKey {
    /// Checks `w = g2^γ`.
    pub fn matches(&self, gpk: &GroupPublicKey) -> bool {
        !self.gamma.is_zero() && gpk.g2.pow(&self.gamma) == gpk.w
    }
}

impl fmt::Debug for MasterIssuingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MasterIssuingKey(..)")
    }
}

/// `mok = ξ`, held by the opener.
#[derive(Clone, PartialEq, Eq)]
pub struct MasterOpeningKey {
    pub xi: Scalar,
}

impl MasterOpeningKey {
    /// Checks `h = u^ξ`.
    pub fn matches(&self, gpk: &GroupPublicKey) -> bool {
        !self.xi.is_zero() && gpk.u.pow(&self.xi) == gpk.h
    }
}

impl fmt::Debug for MasterOpeningKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MasterOpeningKey(..)")
    }
}

/// Long-term OBU identity: `usk = y`, `upk = h^y`.
#[derive(Clone, PartialEq, Eq)]
pub struct UserKeyPair {
    pub usk: Scalar,
    pub upk: G1Element,
}

impl UserKeyPair {
    pub fn matches(&self, gpk: &GroupPublicKey) -> bool {
        !self.usk.is_zero() && gpk.h.pow(&self.usk) == self.upk
    }
}

impl fmt::Debug for UserKeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UserKeyPair")
            .field("upk", &self.upk)
            .finish_non_exhaustive()
    }
}

/// GSet: issuer and opener key material plus the group public key.
///
/// Both authorities are generated in one call; the three outputs are
/// separate values so they can be stored and handed out separately.
pub fn gset<R: RngCore + CryptoRng>(
    rng: &mut R,
    suite: &BilinearSuite,
) -> Result<(GroupPublicKey, MasterIssuingKey, MasterOpeningKey), Error> {
    // Issuer.
    let gamma = Scalar::random(rng)?;
    let g1 = suite.g1_generator.pow(&Scalar::random(rng)?);
    let g2 = suite.g2_generator.pow(&Scalar::random(rng)?);
    let w = g2.pow(&gamma);
    // Opener.
    let u = suite.g1_generator.pow(&Scalar::random(rng)?);
    let xi = Scalar::random(rng)?;
    let h = u.pow(&xi);

    let gpk = GroupPublicKey {
        g1,
        h,
        u,
        g2,
        w,
        h1_tag: H1_TAG.to_vec(),
        h2_tag: H2_TAG.to_vec(),
    };
    Ok((gpk, MasterIssuingKey { gamma }, MasterOpeningKey { xi }))
}

/// UKg: `y ← ℤp*`, `upk = h^y`.
pub fn ukg<R: RngCore + CryptoRng>(rng: &mut R, gpk: &GroupPublicKey) -> Result<UserKeyPair, Error> {
    let usk = Scalar::random(rng)?;
    Ok(UserKeyPair {
        usk,
        upk: gpk.h.pow(&usk),
    })
}
