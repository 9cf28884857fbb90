//! Asymmetric (Type-3) bilinear group suite.
//!
//! The concrete backend is BLS12-381. Everything above this module works with
//! the [`Scalar`], [`G1Element`], [`G2Element`] and [`GtElement`] newtypes and
//! never touches the backend directly. Group operations are written in
//! multiplicative notation (`a * b` is the group law, `a.pow(&k)` is
//! exponentiation) and every one of them bumps a thread-local [`OpCounts`]
//! so the cost of a protocol step can be read back with [`count_ops`].

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use ark_bls12_381::{g1, Bls12_381, Fq, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::hashing::curve_maps::wb::WBMap;
use ark_ec::hashing::map_to_curve_hasher::MapToCurveBasedHasher;
use ark_ec::hashing::HashToCurve;
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::{AffineRepr, CurveGroup, PrimeGroup};
use ark_ff::field_hashers::{DefaultFieldHasher, HashToField};
use ark_ff::{BigInteger, Field, One, PrimeField, Zero};
use rand::{CryptoRng, RngCore};
use sha2::Sha256;

use crate::error::Error;
use crate::wire::{frame_hash_items, HashItem};

/// Domain-separation tag for H1 (hash onto G1).
pub const H1_TAG: &[u8] = b"AEE-H1-v1";
/// Domain-separation tag for H2 (hash onto the scalar field).
pub const H2_TAG: &[u8] = b"AEE-H2-v1";

// ---------------------------------------------------------------------------
// Operation counting
// ---------------------------------------------------------------------------

/// Tally of group operations performed on the current thread.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpCounts {
    pub mul_g1: u64,
    pub exp_g1: u64,
    pub mul_g2: u64,
    pub exp_g2: u64,
    pub mul_gt: u64,
    pub exp_gt: u64,
    pub pairings: u64,
    pub hash_to_g1: u64,
    pub hash_to_scalar: u64,
}

impl OpCounts {
    pub const fn new() -> Self {
        OpCounts {
            mul_g1: 0,
            exp_g1: 0,
            mul_g2: 0,
            exp_g2: 0,
            mul_gt: 0,
            exp_gt: 0,
            pairings: 0,
            hash_to_g1: 0,
            hash_to_scalar: 0,
        }
    }

    /// Counts restricted to the columns of the group-operation table
    /// (G1/GT multiplications and exponentiations, pairings).
    pub fn group_ops(&self) -> (u64, u64, u64, u64, u64) {
        (self.mul_g1, self.exp_g1, self.mul_gt, self.exp_gt, self.pairings)
    }

    pub fn total(&self) -> u64 {
        self.mul_g1
            + self.exp_g1
            + self.mul_g2
            + self.exp_g2
            + self.mul_gt
            + self.exp_gt
            + self.pairings
            + self.hash_to_g1
            + self.hash_to_scalar
    }
}

impl Sub for OpCounts {
    type Output = OpCounts;

    fn sub(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            mul_g1: self.mul_g1 - rhs.mul_g1,
            exp_g1: self.exp_g1 - rhs.exp_g1,
            mul_g2: self.mul_g2 - rhs.mul_g2,
            exp_g2: self.exp_g2 - rhs.exp_g2,
            mul_gt: self.mul_gt - rhs.mul_gt,
            exp_gt: self.exp_gt - rhs.exp_gt,
            pairings: self.pairings - rhs.pairings,
            hash_to_g1: self.hash_to_g1 - rhs.hash_to_g1,
            hash_to_scalar: self.hash_to_scalar - rhs.hash_to_scalar,
        }
    }
}

impl Add for OpCounts {
    type Output = OpCounts;

    fn add(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            mul_g1: self.mul_g1 + rhs.mul_g1,
            exp_g1: self.exp_g1 + rhs.exp_g1,
            mul_g2: self.mul_g2 + rhs.mul_g2,
            exp_g2: self.exp_g2 + rhs.exp_g2,
            mul_gt: self.mul_gt + rhs.mul_gt,
            exp_gt: self.exp_gt + rhs.exp_gt,
            pairings: self.pairings + rhs.pairings,
            hash_to_g1: self.hash_to_g1 + rhs.hash_to_g1,
            hash_to_scalar: self.hash_to_scalar + rhs.hash_to_scalar,
        }
    }
}

impl fmt::Display for OpCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = [
            (self.mul_g1, "mul_G1"),
            (self.exp_g1, "exp_G1"),
            (self.mul_g2, "mul_G2"),
            (self.exp_g2, "exp_G2"),
            (self.mul_gt, "mul_GT"),
            (self.exp_gt, "exp_GT"),
            (self.pairings, "pairing"),
            (self.hash_to_g1, "H1"),
            (self.hash_to_scalar, "H2"),
        ];
        let mut first = true;
        for (n, name) in terms.iter().filter(|(n, _)| *n > 0) {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{n} {name}")?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

thread_local! {
    static COUNTS: Cell<OpCounts> = const { Cell::new(OpCounts::new()) };
}

fn bump(update: impl FnOnce(&mut OpCounts)) {
    COUNTS.with(|cell| {
        let mut counts = cell.get();
        update(&mut counts);
        cell.set(counts);
    });
}

/// Snapshot of the running totals for this thread.
pub fn op_counts() -> OpCounts {
    COUNTS.with(Cell::get)
}

/// Runs `f` and returns its result together with the operations it performed.
pub fn count_ops<R>(f: impl FnOnce() -> R) -> (R, OpCounts) {
    let before = op_counts();
    let out = f();
    (out, op_counts() - before)
}

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

/// Element of ℤp, always held in canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Scalar(pub(crate) Fr);

impl Scalar {
    pub const BYTES: usize = 32;

    pub fn zero() -> Self {
        Scalar(Fr::zero())
    }

    pub fn one() -> Self {
        Scalar(Fr::one())
    }

    pub fn from_u64(v: u64) -> Self {
        Scalar(Fr::from(v))
    }

    /// Uniform sample from ℤp* (zero is rejected and redrawn).
    pub fn random<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Result<Self, Error> {
        let mut wide = [0u8; 64];
        loop {
            rng.try_fill_bytes(&mut wide)
                .map_err(|e| Error::Rng(e.to_string()))?;
            let s = Fr::from_le_bytes_mod_order(&wide);
            if !s.is_zero() {
                return Ok(Scalar(s));
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn invert(&self) -> Option<Scalar> {
        self.0.inverse().map(Scalar)
    }

    /// Fixed-width big-endian encoding.
    pub fn to_bytes(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        out.copy_from_slice(&self.0.into_bigint().to_bytes_be());
        out
    }

    /// Parses a big-endian encoding, rejecting values ≥ p.
    pub fn from_bytes(bytes: &[u8; 32]) -> Option<Scalar> {
        let s = Fr::from_be_bytes_mod_order(bytes);
        (s.into_bigint().to_bytes_be() == bytes[..]).then_some(Scalar(s))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar(0x{})", hex_prefix(&self.to_bytes()))
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

// ---------------------------------------------------------------------------
// G1
// ---------------------------------------------------------------------------

/// Element of the prime-order subgroup of G1.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct G1Element(pub(crate) G1Projective);

impl G1Element {
    pub const COMPRESSED_BYTES: usize = 48;
    pub const UNCOMPRESSED_BYTES: usize = 96;

    pub fn identity() -> Self {
        G1Element(G1Projective::zero())
    }

    pub fn generator() -> Self {
        G1Element(G1Projective::generator())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    /// Uniform element of G1 \ {1}, computed as a generator power.
    pub fn random<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Result<Self, Error> {
        let k = Scalar::random(rng)?;
        Ok(Self::generator().pow(&k))
    }

    pub fn pow(&self, e: &Scalar) -> Self {
        bump(|c| c.exp_g1 += 1);
        G1Element(self.0 * e.0)
    }

    /// Subgroup membership by the definition: multiplying by p gives the
    /// identity. Slow; meant for checks, not the hot path.
    pub fn order_divides_p(&self) -> bool {
        self.0.mul_bigint(Fr::MODULUS).is_zero()
    }

    pub fn to_compressed(&self) -> [u8; 48] {
        let mut out = [0u8; 48];
        let p = self.0.into_affine();
        if p.is_zero() {
            out[0] = FLAG_COMPRESSED | FLAG_INFINITY;
            return out;
        }
        let (x, y) = p.xy().expect("non-identity point has coordinates");
        out.copy_from_slice(&fq_to_bytes(&x));
        out[0] |= FLAG_COMPRESSED;
        if y > -y {
            out[0] |= FLAG_SORT;
        }
        out
    }

    pub fn to_uncompressed(&self) -> [u8; 96] {
        let mut out = [0u8; 96];
        let p = self.0.into_affine();
        if p.is_zero() {
            out[0] = FLAG_INFINITY;
            return out;
        }
        let (x, y) = p.xy().expect("non-identity point has coordinates");
        out[..48].copy_from_slice(&fq_to_bytes(&x));
        out[48..].copy_from_slice(&fq_to_bytes(&y));
        out
    }

    /// Decodes the 48-byte compressed form and checks subgroup membership.
    pub fn from_compressed(bytes: &[u8; 48]) -> Result<Self, PointError> {
        let flags = bytes[0] & FLAG_MASK;
        if flags & FLAG_COMPRESSED == 0 {
            return Err(PointError::Flags);
        }
        if flags & FLAG_INFINITY != 0 {
            let rest_zero = bytes[0] & !FLAG_MASK == 0 && bytes[1..].iter().all(|&b| b == 0);
            if flags & FLAG_SORT != 0 || !rest_zero {
                return Err(PointError::Flags);
            }
            return Ok(Self::identity());
        }
        let mut xb = *bytes;
        xb[0] &= !FLAG_MASK;
        let x = fq_from_bytes(&xb).ok_or(PointError::NonCanonical)?;
        let p = G1Affine::get_point_from_x_unchecked(x, flags & FLAG_SORT != 0)
            .ok_or(PointError::NotOnCurve)?;
        if !p.is_in_correct_subgroup_assuming_on_curve() {
            return Err(PointError::WrongSubgroup);
        }
        Ok(G1Element(p.into_group()))
    }

    /// Decodes the 96-byte uncompressed form and checks curve and subgroup.
    pub fn from_uncompressed(bytes: &[u8; 96]) -> Result<Self, PointError> {
        let flags = bytes[0] & FLAG_MASK;
        if flags & (FLAG_COMPRESSED | FLAG_SORT) != 0 {
            return Err(PointError::Flags);
        }
        if flags & FLAG_INFINITY != 0 {
            let rest_zero = bytes[0] & !FLAG_MASK == 0 && bytes[1..].iter().all(|&b| b == 0);
            return if rest_zero {
                Ok(Self::identity())
            } else {
                Err(PointError::Flags)
            };
        }
        let x = fq_from_bytes(bytes[..48].try_into().unwrap()).ok_or(PointError::NonCanonical)?;
        let y = fq_from_bytes(bytes[48..].try_into().unwrap()).ok_or(PointError::NonCanonical)?;
        let p = G1Affine::new_unchecked(x, y);
        if !p.is_on_curve() {
            return Err(PointError::NotOnCurve);
        }
        if !p.is_in_correct_subgroup_assuming_on_curve() {
            return Err(PointError::WrongSubgroup);
        }
        Ok(G1Element(p.into_group()))
    }
}

impl fmt::Debug for G1Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G1(0x{})", hex_prefix(&self.to_compressed()))
    }
}

impl Mul for G1Element {
    type Output = G1Element;
    fn mul(self, rhs: G1Element) -> G1Element {
        bump(|c| c.mul_g1 += 1);
        G1Element(self.0 + rhs.0)
    }
}

/// `a / b` is `a · b⁻¹`; inversion on an elliptic curve is a sign flip, so
/// the whole thing is accounted as one multiplication.
impl Div for G1Element {
    type Output = G1Element;
    fn div(self, rhs: G1Element) -> G1Element {
        bump(|c| c.mul_g1 += 1);
        G1Element(self.0 - rhs.0)
    }
}

// ---------------------------------------------------------------------------
// G2
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
pub struct G2Element(pub(crate) G2Projective);

impl G2Element {
    pub const UNCOMPRESSED_BYTES: usize = 192;

    pub fn identity() -> Self {
        G2Element(G2Projective::zero())
    }

    pub fn generator() -> Self {
        G2Element(G2Projective::generator())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    pub fn random<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Result<Self, Error> {
        let k = Scalar::random(rng)?;
        Ok(Self::generator().pow(&k))
    }

    pub fn pow(&self, e: &Scalar) -> Self {
        bump(|c| c.exp_g2 += 1);
        G2Element(self.0 * e.0)
    }

    pub fn order_divides_p(&self) -> bool {
        self.0.mul_bigint(Fr::MODULUS).is_zero()
    }

    /// `x.c1 ‖ x.c0 ‖ y.c1 ‖ y.c0`, each coordinate big-endian.
    pub fn to_uncompressed(&self) -> [u8; 192] {
        let mut out = [0u8; 192];
        let p = self.0.into_affine();
        if p.is_zero() {
            out[0] = FLAG_INFINITY;
            return out;
        }
        let (x, y) = p.xy().expect("non-identity point has coordinates");
        out[..48].copy_from_slice(&fq_to_bytes(&x.c1));
        out[48..96].copy_from_slice(&fq_to_bytes(&x.c0));
        out[96..144].copy_from_slice(&fq_to_bytes(&y.c1));
        out[144..].copy_from_slice(&fq_to_bytes(&y.c0));
        out
    }

    pub fn from_uncompressed(bytes: &[u8; 192]) -> Result<Self, PointError> {
        let flags = bytes[0] & FLAG_MASK;
        if flags & (FLAG_COMPRESSED | FLAG_SORT) != 0 {
            return Err(PointError::Flags);
        }
        if flags & FLAG_INFINITY != 0 {
            let rest_zero = bytes[0] & !FLAG_MASK == 0 && bytes[1..].iter().all(|&b| b == 0);
            return if rest_zero {
                Ok(Self::identity())
            } else {
                Err(PointError::Flags)
            };
        }
        let coord = |i: usize| fq_from_bytes(bytes[i * 48..(i + 1) * 48].try_into().unwrap());
        let (x1, x0, y1, y0) = (coord(0), coord(1), coord(2), coord(3));
        let (Some(x1), Some(x0), Some(y1), Some(y0)) = (x1, x0, y1, y0) else {
            return Err(PointError::NonCanonical);
        };
        let x = ark_bls12_381::Fq2::new(x0, x1);
        let y = ark_bls12_381::Fq2::new(y0, y1);
        let p = G2Affine::new_unchecked(x, y);
        if !p.is_on_curve() {
            return Err(PointError::NotOnCurve);
        }
        if !p.is_in_correct_subgroup_assuming_on_curve() {
            return Err(PointError::WrongSubgroup);
        }
        Ok(G2Element(p.into_group()))
    }
}

impl fmt::Debug for G2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G2(0x{})", hex_prefix(&self.to_uncompressed()))
    }
}

impl Mul for G2Element {
    type Output = G2Element;
    fn mul(self, rhs: G2Element) -> G2Element {
        bump(|c| c.mul_g2 += 1);
        G2Element(self.0 + rhs.0)
    }
}

// ---------------------------------------------------------------------------
// GT
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
pub struct GtElement(pub(crate) PairingOutput<Bls12_381>);

impl GtElement {
    pub const BYTES: usize = 576;

    pub fn identity() -> Self {
        GtElement(PairingOutput::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    pub fn pow(&self, e: &Scalar) -> Self {
        bump(|c| c.exp_gt += 1);
        GtElement(self.0 * e.0)
    }

    /// The twelve Fq coefficients of the Fq12 representative, big-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::BYTES);
        for coeff in self.0 .0.to_base_prime_field_elements() {
            out.extend_from_slice(&fq_to_bytes(&coeff));
        }
        out
    }
}

impl fmt::Debug for GtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GT(0x{})", hex_prefix(&self.to_bytes()))
    }
}

impl Mul for GtElement {
    type Output = GtElement;
    fn mul(self, rhs: GtElement) -> GtElement {
        bump(|c| c.mul_gt += 1);
        GtElement(self.0 + rhs.0)
    }
}

impl Div for GtElement {
    type Output = GtElement;
    fn div(self, rhs: GtElement) -> GtElement {
        bump(|c| c.mul_gt += 1);
        GtElement(self.0 - rhs.0)
    }
}

/// ê : G1 × G2 → GT.
pub fn pairing(a: &G1Element, b: &G2Element) -> GtElement {
    bump(|c| c.pairings += 1);
    GtElement(Bls12_381::pairing(a.0, b.0))
}

// ---------------------------------------------------------------------------
// Hashing
// ---------------------------------------------------------------------------

type G1Hasher = MapToCurveBasedHasher<G1Projective, DefaultFieldHasher<Sha256, 128>, WBMap<g1::Config>>;

/// H1: hash onto G1 with the RFC 9380 `BLS12381G1_XMD:SHA-256_SSWU_RO_`
/// suite under the given domain-separation tag.
pub fn hash_to_g1(domain_tag: &[u8], message: &[u8]) -> G1Element {
    bump(|c| c.hash_to_g1 += 1);
    let hasher = G1Hasher::new(domain_tag).expect("WB map parameters for BLS12-381 G1 are valid");
    let p = hasher
        .hash(message)
        .expect("hash-to-curve is total for non-empty tags");
    G1Element(p.into_group())
}

/// H2: hash an ordered list of items onto ℤp.
///
/// Items are framed by [`frame_hash_items`] (item count, then one
/// type-tagged, length-prefixed record per item) and the frame is mapped to
/// the field with RFC 9380 `hash_to_field` (expand_message_xmd, SHA-256).
pub fn hash_to_scalar(domain_tag: &[u8], items: &[HashItem<'_>]) -> Scalar {
    bump(|c| c.hash_to_scalar += 1);
    let framed = frame_hash_items(items);
    let hasher = <DefaultFieldHasher<Sha256, 128> as HashToField<Fr>>::new(domain_tag);
    let [s] = hasher.hash_to_field::<1>(&framed);
    Scalar(s)
}

// ---------------------------------------------------------------------------
// Suite description
// ---------------------------------------------------------------------------

/// Byte widths of the elements that make up signatures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignatureWidths {
    pub g1_full: usize,
    pub g1_compressed: usize,
    pub scalar: usize,
}

/// Widths of the reference 224-bit d-type curve: 56-byte G1 points (29 when
/// compressed) and 28-byte scalars.
pub const D224_WIDTHS: SignatureWidths = SignatureWidths {
    g1_full: 56,
    g1_compressed: 29,
    scalar: 28,
};

#[derive(Clone, Debug)]
pub struct BilinearSuite {
    pub name: &'static str,
    /// Big-endian encoding of the prime group order p.
    pub order: [u8; 32],
    pub g1_generator: G1Element,
    pub g2_generator: G2Element,
    pub widths: SignatureWidths,
    pub g2_full_bytes: usize,
    pub gt_bytes: usize,
}

impl BilinearSuite {
    pub fn bls12_381() -> Self {
        let mut order = [0u8; 32];
        order.copy_from_slice(&Fr::MODULUS.to_bytes_be());
        BilinearSuite {
            name: "BLS12-381",
            order,
            g1_generator: G1Element::generator(),
            g2_generator: G2Element::generator(),
            widths: SignatureWidths {
                g1_full: G1Element::UNCOMPRESSED_BYTES,
                g1_compressed: G1Element::COMPRESSED_BYTES,
                scalar: Scalar::BYTES,
            },
            g2_full_bytes: G2Element::UNCOMPRESSED_BYTES,
            gt_bytes: GtElement::BYTES,
        }
    }

    pub fn order_hex(&self) -> String {
        let mut s = String::with_capacity(64);
        for b in self.order {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    /// Sampled check of the pairing contract: non-degeneracy on the
    /// generators, bilinearity on `trials` random exponent pairs, and
    /// generator orders dividing p.
    pub fn self_check<R: RngCore + CryptoRng>(&self, rng: &mut R, trials: usize) -> Result<(), Error> {
        let base = pairing(&self.g1_generator, &self.g2_generator);
        if base.is_identity() {
            return Err(Error::Suite("pairing is degenerate on the generators"));
        }
        if !self.g1_generator.order_divides_p() || !self.g2_generator.order_divides_p() {
            return Err(Error::Suite("generator order does not divide p"));
        }
        for _ in 0..trials {
            let a = Scalar::random(rng)?;
            let b = Scalar::random(rng)?;
            let lhs = pairing(&self.g1_generator.pow(&a), &self.g2_generator.pow(&b));
            if lhs != base.pow(&(a * b)) {
                return Err(Error::Suite("bilinearity check failed"));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Point encoding helpers (ZCash BLS12-381 conventions)
// ---------------------------------------------------------------------------

const FLAG_COMPRESSED: u8 = 0x80;
const FLAG_INFINITY: u8 = 0x40;
const FLAG_SORT: u8 = 0x20;
const FLAG_MASK: u8 = 0xe0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PointError {
    #[error("invalid encoding flags")]
    Flags,
    #[error("coordinate is not a canonical field element")]
    NonCanonical,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point is not in the prime-order subgroup")]
    WrongSubgroup,
}

fn fq_to_bytes(v: &Fq) -> [u8; 48] {
    let mut out = [0u8; 48];
    out.copy_from_slice(&v.into_bigint().to_bytes_be());
    out
}

fn fq_from_bytes(bytes: &[u8; 48]) -> Option<Fq> {
    let v = Fq::from_be_bytes_mod_order(bytes);
    (v.into_bigint().to_bytes_be() == bytes[..]).then_some(v)
}

fn hex_prefix(bytes: &[u8]) -> String {
    bytes.iter().take(8).map(|b| format!("{b:02x}")).collect::<String>() + "…"
}
