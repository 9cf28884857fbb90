//! Event-bound group signatures (GSign / GVer).
//!
//! A signature on message `m` for event `et` is
//! `σ = (D, B, T, c, s_x, s_y, s_α, s_δ)` with `D = u^α`, `B = A·h^α` and the
//! linking token `T = H1(et)^y`. The proof shows knowledge of
//! `(x, y, α, δ = α·x)` satisfying
//! `ê(B, w·g2^x) · ê(h, w)^(−α) · ê(h, g2)^(y−δ) = ê(g1, g2)` together with
//! `D = u^α`, `T = H1(et)^y` and `1 = u^δ·D^(−x)`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{CryptoRng, RngCore};

use crate::algebra::{pairing, G1Element, GtElement, Scalar};
pub use crate::enroll::GroupSigningKey;
use crate::error::Error;
use crate::keys::GroupPublicKey;
use crate::wire::HashItem;

/// Event identifier `et`: a non-empty byte string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(Vec<u8>);

impl EventId {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self, Error> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            return Err(Error::EmptyEvent);
        }
        Ok(EventId(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl FromStr for EventId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        EventId::new(s.as_bytes().to_vec())
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

impl fmt::Debug for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EventId({self})")
    }
}

/// `σ = (D, B, T, c, s_x, s_y, s_α, s_δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSignature {
    pub d: G1Element,
    pub b: G1Element,
    pub t: G1Element,
    pub c: Scalar,
    pub s_x: Scalar,
    pub s_y: Scalar,
    pub s_alpha: Scalar,
    pub s_delta: Scalar,
}

impl GroupSignature {
    pub const G1_COMPONENTS: usize = 3;
    pub const SCALAR_COMPONENTS: usize = 5;

    /// The linking token `T`.
    pub fn token(&self) -> &G1Element {
        &self.t
    }
}

/// Signer-side pairing values that depend only on `gpk` and `A`:
/// `ê(A, g2)`, `ê(h, w)`, `ê(h, g2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingContext {
    pub e_a_g2: GtElement,
    pub e_h_w: GtElement,
    pub e_h_g2: GtElement,
}

/// Three pairings, computed once per credential.
pub fn precompute_context(gpk: &GroupPublicKey, gsk: &GroupSigningKey) -> PairingContext {
    PairingContext {
        e_a_g2: pairing(&gsk.a, &gpk.g2),
        e_h_w: pairing(&gpk.h, &gpk.w),
        e_h_g2: pairing(&gpk.h, &gpk.g2),
    }
}

/// Per-signature randomness: the blinding `α` and the four proof nonces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nonces {
    pub alpha: Scalar,
    pub r_x: Scalar,
    pub r_y: Scalar,
    pub r_alpha: Scalar,
    pub r_delta: Scalar,
}

impl Nonces {
    pub fn random<R: RngCore + CryptoRng>(rng: &mut R) -> Result<Self, Error> {
        Ok(Nonces {
            alpha: Scalar::random(rng)?,
            r_x: Scalar::random(rng)?,
            r_y: Scalar::random(rng)?,
            r_alpha: Scalar::random(rng)?,
            r_delta: Scalar::random(rng)?,
        })
    }
}

/// The commitments `(R1, R2, R3, R4)` hashed into the challenge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commitments {
    pub r1: G1Element,
    pub r2: G1Element,
    pub r3: G1Element,
    pub r4: GtElement,
}

/// How the signer obtains `R4`.
#[derive(Clone, Copy, Debug)]
enum R4Route<'a> {
    /// `ê(A,g2)^(r_x) · ê(h,w)^(r_α) · ê(h,g2)^(α·r_x + r_y + r_δ)` from cached pairings.
    Cached(&'a PairingContext),
    /// `ê(B,g2)^(r_x) · ê(h,w)^(r_α) · ê(h,g2)^(r_y + r_δ)` with fresh pairings.
    Direct,
}

/// GSign with a precomputed [`PairingContext`]: no pairings at signing time.
pub fn gsign<R: RngCore + CryptoRng>(
    gpk: &GroupPublicKey,
    gsk: &GroupSigningKey,
    ctx: &PairingContext,
    et: &EventId,
    m: &[u8],
    rng: &mut R,
) -> Result<GroupSignature, Error> {
    let nonces = Nonces::random(rng)?;
    Ok(sign_inner(gpk, gsk, R4Route::Cached(ctx), et, m, &nonces).0)
}

/// GSign computing `R4` from fresh pairings. Given the same randomness it
/// produces exactly the same signature as [`gsign`].
pub fn gsign_without_context<R: RngCore + CryptoRng>(
    gpk: &GroupPublicKey,
    gsk: &GroupSigningKey,
    et: &EventId,
    m: &[u8],
    rng: &mut R,
) -> Result<GroupSignature, Error> {
    let nonces = Nonces::random(rng)?;
    Ok(sign_inner(gpk, gsk, R4Route::Direct, et, m, &nonces).0)
}

fn sign_inner(
    gpk: &GroupPublicKey,
    gsk: &GroupSigningKey,
    route: R4Route<'_>,
    et: &EventId,
    m: &[u8],
    n: &Nonces,
) -> (GroupSignature, Commitments) {
    let base = gpk.hash_event(et);
    let d = gpk.u.pow(&n.alpha);
    let b = gsk.a * gpk.h.pow(&n.alpha);
    let t = base.pow(&gsk.y);

    let r1 = gpk.u.pow(&n.r_alpha);
    let r2 = base.pow(&n.r_y);
    let r3 = gpk.u.pow(&n.r_delta) * d.pow(&n.r_x);
    let r4 = match route {
        R4Route::Cached(ctx) => {
            ctx.e_a_g2.pow(&n.r_x)
                * ctx.e_h_w.pow(&n.r_alpha)
                * ctx.e_h_g2.pow(&(n.alpha * n.r_x + n.r_y + n.r_delta))
        }
        R4Route::Direct => {
            pairing(&b, &gpk.g2).pow(&n.r_x)
                * pairing(&gpk.h, &gpk.w).pow(&n.r_alpha)
                * pairing(&gpk.h, &gpk.g2).pow(&(n.r_y + n.r_delta))
        }
    };
    let coms = Commitments { r1, r2, r3, r4 };

    let c = challenge(gpk, et, m, &d, &b, &t, &coms);
    let sigma = GroupSignature {
        d,
        b,
        t,
        c,
        s_x: c * gsk.x + n.r_x,
        s_y: c * gsk.y + n.r_y,
        s_alpha: n.r_alpha - c * n.alpha,
        s_delta: n.r_delta - c * n.alpha * gsk.x,
    };
    (sigma, coms)
}

/// `c = H2(et, m, D, B, T, R1, R2, R3, R4)`.
fn challenge(
    gpk: &GroupPublicKey,
    et: &EventId,
    m: &[u8],
    d: &G1Element,
    b: &G1Element,
    t: &G1Element,
    coms: &Commitments,
) -> Scalar {
    gpk.challenge(&challenge_items(et, m, d, b, t, coms))
}

fn challenge_items<'a>(
    et: &'a EventId,
    m: &'a [u8],
    d: &'a G1Element,
    b: &'a G1Element,
    t: &'a G1Element,
    coms: &'a Commitments,
) -> [HashItem<'a>; 9] {
    [
        HashItem::Event(et),
        HashItem::Bytes(m),
        HashItem::G1(d),
        HashItem::G1(b),
        HashItem::G1(t),
        HashItem::G1(&coms.r1),
        HashItem::G1(&coms.r2),
        HashItem::G1(&coms.r3),
        HashItem::Gt(&coms.r4),
    ]
}

/// Verifier commitments with `R̃4` folded into two pairings:
/// `ê(B^(s_x)·h^(s_y+s_δ)·g1^(−c), g2) · ê(h^(s_α)·B^c, w)`.
fn verifier_commitments(gpk: &GroupPublicKey, et: &EventId, sigma: &GroupSignature) -> Commitments {
    let base = gpk.hash_event(et);
    let c = &sigma.c;
    let r1 = gpk.u.pow(&sigma.s_alpha) * sigma.d.pow(c);
    let r2 = base.pow(&sigma.s_y) * sigma.t.pow(&-*c);
    let r3 = gpk.u.pow(&sigma.s_delta) * sigma.d.pow(&sigma.s_x);
    let left = sigma.b.pow(&sigma.s_x) * gpk.h.pow(&(sigma.s_y + sigma.s_delta)) / gpk.g1.pow(c);
    let right = gpk.h.pow(&sigma.s_alpha) * sigma.b.pow(c);
    let r4 = pairing(&left, &gpk.g2) * pairing(&right, &gpk.w);
    Commitments { r1, r2, r3, r4 }
}

/// GVer. Signatures whose `D`, `B` or `T` is the identity are rejected
/// before any arithmetic.
pub fn gver(gpk: &GroupPublicKey, et: &EventId, m: &[u8], sigma: &GroupSignature) -> bool {
    if sigma.d.is_identity() || sigma.b.is_identity() || sigma.t.is_identity() {
        return false;
    }
    let coms = verifier_commitments(gpk, et, sigma);
    challenge(gpk, et, m, &sigma.d, &sigma.b, &sigma.t, &coms) == sigma.c
}

/// One entry of a signing schedule: the event and the first message `m0`
/// whose signature registers the vehicle for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduledSignature {
    pub et: EventId,
    pub sigma: GroupSignature,
}

/// Signs an empty `m0` for every event ahead of time. Event identifiers
/// must be distinct.
pub fn precompute_event_schedule<R: RngCore + CryptoRng>(
    gpk: &GroupPublicKey,
    gsk: &GroupSigningKey,
    ctx: &PairingContext,
    events: &[EventId],
    rng: &mut R,
) -> Result<Vec<ScheduledSignature>, Error> {
    let mut seen = HashSet::with_capacity(events.len());
    for et in events {
        if !seen.insert(et) {
            return Err(Error::DuplicateEvent(et.to_string()));
        }
    }
    events
        .iter()
        .map(|et| {
            Ok(ScheduledSignature {
                et: et.clone(),
                sigma: gsign(gpk, gsk, ctx, et, &[], rng)?,
            })
        })
        .collect()
}

/// Reference implementations and nonce-level hooks used by test oracles.
#[cfg(any(test, feature = "oracles"))]
pub mod oracle {
    use super::*;
    use crate::wire::frame_hash_items;

    /// Deterministic signing from explicit nonces, through the cached route.
    pub fn sign_with_nonces(
        gpk: &GroupPublicKey,
        gsk: &GroupSigningKey,
        ctx: &PairingContext,
        et: &EventId,
        m: &[u8],
        nonces: &Nonces,
    ) -> (GroupSignature, Commitments) {
        sign_inner(gpk, gsk, R4Route::Cached(ctx), et, m, nonces)
    }

    /// Deterministic signing from explicit nonces, with fresh pairings.
    pub fn sign_with_nonces_direct(
        gpk: &GroupPublicKey,
        gsk: &GroupSigningKey,
        et: &EventId,
        m: &[u8],
        nonces: &Nonces,
    ) -> (GroupSignature, Commitments) {
        sign_inner(gpk, gsk, R4Route::Direct, et, m, nonces)
    }

    /// Verifier commitments through the two-pairing form used by [`gver`].
    pub fn verifier_commitments_folded(gpk: &GroupPublicKey, et: &EventId, sigma: &GroupSignature) -> Commitments {
        verifier_commitments(gpk, et, sigma)
    }

    /// Verifier commitments with `R̃4` evaluated term by term:
    /// `ê(B,g2)^(s_x) · ê(h,w)^(s_α) · ê(h,g2)^(s_y+s_δ) · (ê(B,w)/ê(g1,g2))^c`.
    pub fn verifier_commitments_unfolded(gpk: &GroupPublicKey, et: &EventId, sigma: &GroupSignature) -> Commitments {
        let base = gpk.hash_event(et);
        let c = &sigma.c;
        let r4 = pairing(&sigma.b, &gpk.g2).pow(&sigma.s_x)
            * pairing(&gpk.h, &gpk.w).pow(&sigma.s_alpha)
            * pairing(&gpk.h, &gpk.g2).pow(&(sigma.s_y + sigma.s_delta))
            * (pairing(&sigma.b, &gpk.w) / pairing(&gpk.g1, &gpk.g2)).pow(c);
        Commitments {
            r1: gpk.u.pow(&sigma.s_alpha) * sigma.d.pow(c),
            r2: base.pow(&sigma.s_y) * sigma.t.pow(&-*c),
            r3: gpk.u.pow(&sigma.s_delta) * sigma.d.pow(&sigma.s_x),
            r4,
        }
    }

    /// GVer over the term-by-term commitments.
    pub fn gver_unfolded(gpk: &GroupPublicKey, et: &EventId, m: &[u8], sigma: &GroupSignature) -> bool {
        if sigma.d.is_identity() || sigma.b.is_identity() || sigma.t.is_identity() {
            return false;
        }
        let coms = verifier_commitments_unfolded(gpk, et, sigma);
        challenge(gpk, et, m, &sigma.d, &sigma.b, &sigma.t, &coms) == sigma.c
    }

    /// The exact byte string hashed into the challenge.
    pub fn challenge_input(et: &EventId, m: &[u8], sigma: &GroupSignature, coms: &Commitments) -> Vec<u8> {
        frame_hash_items(&challenge_items(et, m, &sigma.d, &sigma.b, &sigma.t, coms))
    }
}
