//! Canonical byte formats.
//!
//! Every public protocol value has a fixed, big-endian encoding here. Raw
//! encodings carry no framing and their lengths follow the size formulas
//! (`3·|G1| + 5·|ℤp|` for group signatures, `2·|ℤp|` for event signatures).
//! Files and other transport use the framed form, which prepends a single
//! version byte.

use thiserror::Error;

use crate::algebra::{G1Element, G2Element, GtElement, PointError, Scalar, SignatureWidths};
use crate::enroll::{GroupSigningKey, IssueResponse, JoinRequest};
use crate::eventsig::{EventPublicKey, EventSignature};
use crate::groupsig::{EventId, GroupSignature};
use crate::keys::{GroupPublicKey, MasterIssuingKey, MasterOpeningKey, UserKeyPair};
use crate::linktrace::TracingProof;

/// Version byte of the framed encoding.
pub const VERSION: u8 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("expected {expected} bytes, found {found}")]
    Length { expected: usize, found: usize },
    #[error("input ended early")]
    Truncated,
    #[error("{0} unexpected trailing bytes")]
    Trailing(usize),
    #[error("unsupported encoding version {0}")]
    Version(u8),
    #[error("field {field}: {source}")]
    Point {
        field: &'static str,
        source: PointError,
    },
    #[error("field {0}: scalar is not reduced modulo p")]
    Scalar(&'static str),
    #[error("field {0}: value is out of range")]
    Range(&'static str),
    #[error("invalid hex text")]
    Hex,
}

// ---------------------------------------------------------------------------
// Hash items
// ---------------------------------------------------------------------------

/// One input to H2.
#[derive(Clone, Copy, Debug)]
pub enum HashItem<'a> {
    Scalar(&'a Scalar),
    G1(&'a G1Element),
    G2(&'a G2Element),
    Gt(&'a GtElement),
    Bytes(&'a [u8]),
    Event(&'a EventId),
    EventKey(&'a EventPublicKey),
    Signature(&'a GroupSignature),
}

impl HashItem<'_> {
    fn type_tag(&self) -> u8 {
        match self {
            HashItem::Scalar(_) => 0x01,
            HashItem::G1(_) => 0x02,
            HashItem::G2(_) => 0x03,
            HashItem::Gt(_) => 0x04,
            HashItem::Bytes(_) => 0x05,
            HashItem::Event(_) => 0x06,
            HashItem::EventKey(_) => 0x07,
            HashItem::Signature(_) => 0x08,
        }
    }

    fn payload(&self) -> Vec<u8> {
        match self {
            HashItem::Scalar(s) => s.to_bytes().to_vec(),
            HashItem::G1(p) => p.to_compressed().to_vec(),
            HashItem::G2(q) => q.to_uncompressed().to_vec(),
            HashItem::Gt(t) => t.to_bytes(),
            HashItem::Bytes(b) => b.to_vec(),
            HashItem::Event(et) => et.as_bytes().to_vec(),
            HashItem::EventKey(epk) => {
                let mut out = epk.base().to_compressed().to_vec();
                out.extend_from_slice(&epk.token().to_compressed());
                out
            }
            HashItem::Signature(sigma) => encode_group_signature(sigma, Mode::Compressed),
        }
    }
}

/// `type tag ‖ u32 length ‖ payload`.
pub fn canonical_hash_item(item: &HashItem<'_>) -> Vec<u8> {
    let payload = item.payload();
    let mut out = Vec::with_capacity(5 + payload.len());
    out.push(item.type_tag());
    out.extend_from_slice(&len_u32(payload.len()).to_be_bytes());
    out.extend_from_slice(&payload);
    out
}

/// `u32 item count ‖ canonical_hash_item(item)…`.
pub fn frame_hash_items(items: &[HashItem<'_>]) -> Vec<u8> {
    let mut out = len_u32(items.len()).to_be_bytes().to_vec();
    for item in items {
        out.extend_from_slice(&canonical_hash_item(item));
    }
    out
}

fn len_u32(n: usize) -> u32 {
    u32::try_from(n).expect("length fits in u32")
}

// ---------------------------------------------------------------------------
// Signatures and size accounting
// ---------------------------------------------------------------------------

/// G1 point form used inside a group signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Full,
    Compressed,
}

impl Mode {
    pub fn g1_width(self, widths: &SignatureWidths) -> usize {
        match self {
            Mode::Full => widths.g1_full,
            Mode::Compressed => widths.g1_compressed,
        }
    }
}

/// `3·|G1| + 5·|ℤp|` under the given widths.
pub fn group_signature_len(widths: &SignatureWidths, mode: Mode) -> usize {
    GroupSignature::G1_COMPONENTS * mode.g1_width(widths) + GroupSignature::SCALAR_COMPONENTS * widths.scalar
}

/// `2·|ℤp|`; event signatures carry no group elements, so there is no
/// compressed variant.
pub fn event_signature_len(widths: &SignatureWidths) -> usize {
    EventSignature::SCALAR_COMPONENTS * widths.scalar
}

/// `D ‖ B ‖ T ‖ c ‖ s_x ‖ s_y ‖ s_α ‖ s_δ` with no framing.
pub fn encode_group_signature(sigma: &GroupSignature, mode: Mode) -> Vec<u8> {
    let mut w = Writer::default();
    for p in [&sigma.d, &sigma.b, &sigma.t] {
        match mode {
            Mode::Full => w.bytes(&p.to_uncompressed()),
            Mode::Compressed => w.bytes(&p.to_compressed()),
        }
    }
    for s in [&sigma.c, &sigma.s_x, &sigma.s_y, &sigma.s_alpha, &sigma.s_delta] {
        w.scalar(s);
    }
    w.0
}

/// Decodes either raw form; the mode is recovered from the length.
pub fn decode_group_signature(bytes: &[u8]) -> Result<GroupSignature, DecodeError> {
    let full = 3 * G1Element::UNCOMPRESSED_BYTES + 5 * Scalar::BYTES;
    let compressed = 3 * G1Element::COMPRESSED_BYTES + 5 * Scalar::BYTES;
    let mode = match bytes.len() {
        n if n == full => Mode::Full,
        n if n == compressed => Mode::Compressed,
        n => {
            return Err(DecodeError::Length {
                expected: compressed,
                found: n,
            })
        }
    };
    let mut r = Reader::new(bytes);
    let mut point = |field| match mode {
        Mode::Full => r.g1_uncompressed(field),
        Mode::Compressed => r.g1(field),
    };
    let d = point("D")?;
    let b = point("B")?;
    let t = point("T")?;
    let sigma = GroupSignature {
        d,
        b,
        t,
        c: r.scalar("c")?,
        s_x: r.scalar("s_x")?,
        s_y: r.scalar("s_y")?,
        s_alpha: r.scalar("s_alpha")?,
        s_delta: r.scalar("s_delta")?,
    };
    r.finish()?;
    Ok(sigma)
}

pub fn encode_event_signature(sig: &EventSignature) -> Vec<u8> {
    let mut w = Writer::default();
    w.scalar(&sig.s_e);
    w.scalar(&sig.c_e);
    w.0
}

pub fn decode_event_signature(bytes: &[u8]) -> Result<EventSignature, DecodeError> {
    let mut r = Reader::new(bytes);
    let sig = EventSignature {
        s_e: r.scalar("s_e")?,
        c_e: r.scalar("c_e")?,
    };
    r.finish()?;
    Ok(sig)
}

// ---------------------------------------------------------------------------
// Raw and framed encodings for every public type
// ---------------------------------------------------------------------------

pub trait Wire: Sized {
    fn to_wire(&self) -> Vec<u8>;
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError>;
}

/// Version byte followed by the raw encoding.
pub fn to_framed<T: Wire>(value: &T) -> Vec<u8> {
    let mut out = vec![VERSION];
    out.extend_from_slice(&value.to_wire());
    out
}

pub fn from_framed<T: Wire>(bytes: &[u8]) -> Result<T, DecodeError> {
    match bytes.split_first() {
        None => Err(DecodeError::Truncated),
        Some((&VERSION, body)) => T::from_wire(body),
        Some((&v, _)) => Err(DecodeError::Version(v)),
    }
}

/// Lower-case hex of the framed encoding.
pub fn to_hex<T: Wire>(value: &T) -> String {
    hex::encode(to_framed(value))
}

/// Parses [`to_hex`] output; surrounding whitespace is ignored.
pub fn from_hex<T: Wire>(text: &str) -> Result<T, DecodeError> {
    let bytes = hex::decode(text.trim()).map_err(|_| DecodeError::Hex)?;
    from_framed(&bytes)
}

impl Wire for GroupSignature {
    fn to_wire(&self) -> Vec<u8> {
        encode_group_signature(self, Mode::Compressed)
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_group_signature(bytes)
    }
}

impl Wire for EventSignature {
    fn to_wire(&self) -> Vec<u8> {
        encode_event_signature(self)
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        decode_event_signature(bytes)
    }
}

impl Wire for G1Element {
    fn to_wire(&self) -> Vec<u8> {
        self.to_compressed().to_vec()
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let p = r.g1("point")?;
        r.finish()?;
        Ok(p)
    }
}

impl Wire for GroupPublicKey {
    fn to_wire(&self) -> Vec<u8> {
        let mut w = Writer::default();
        w.g1(&self.g1);
        w.g1(&self.h);
        w.g1(&self.u);
        w.g2(&self.g2);
        w.g2(&self.w);
        w.var_bytes(&self.h1_tag);
        w.var_bytes(&self.h2_tag);
        w.0
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let gpk = GroupPublicKey {
            g1: r.g1("g1")?,
            h: r.g1("h")?,
            u: r.g1("u")?,
            g2: r.g2("g2")?,
            w: r.g2("w")?,
            h1_tag: r.var_bytes()?,
            h2_tag: r.var_bytes()?,
        };
        r.finish()?;
        Ok(gpk)
    }
}

impl Wire for MasterIssuingKey {
    fn to_wire(&self) -> Vec<u8> {
        self.gamma.to_bytes().to_vec()
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let gamma = r.nonzero_scalar("gamma")?;
        r.finish()?;
        Ok(MasterIssuingKey { gamma })
    }
}

impl Wire for MasterOpeningKey {
    fn to_wire(&self) -> Vec<u8> {
        self.xi.to_bytes().to_vec()
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let xi = r.nonzero_scalar("xi")?;
        r.finish()?;
        Ok(MasterOpeningKey { xi })
    }
}

impl Wire for UserKeyPair {
    fn to_wire(&self) -> Vec<u8> {
        let mut w = Writer::default();
        w.scalar(&self.usk);
        w.g1(&self.upk);
        w.0
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let kp = UserKeyPair {
            usk: r.nonzero_scalar("usk")?,
            upk: r.g1("upk")?,
        };
        r.finish()?;
        Ok(kp)
    }
}

impl Wire for JoinRequest {
    fn to_wire(&self) -> Vec<u8> {
        let mut w = Writer::default();
        w.g1(&self.z);
        w.scalar(&self.c);
        w.scalar(&self.s);
        w.0
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let req = JoinRequest {
            z: r.g1("z")?,
            c: r.scalar("c")?,
            s: r.scalar("s")?,
        };
        r.finish()?;
        Ok(req)
    }
}

impl Wire for IssueResponse {
    fn to_wire(&self) -> Vec<u8> {
        let mut w = Writer::default();
        w.scalar(&self.x);
        w.g1(&self.a);
        w.0
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let resp = IssueResponse {
            x: r.scalar("x")?,
            a: r.g1("A")?,
        };
        r.finish()?;
        Ok(resp)
    }
}

impl Wire for GroupSigningKey {
    fn to_wire(&self) -> Vec<u8> {
        let mut w = Writer::default();
        w.scalar(&self.x);
        w.scalar(&self.y);
        w.g1(&self.a);
        w.0
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let gsk = GroupSigningKey {
            x: r.scalar("x")?,
            y: r.nonzero_scalar("y")?,
            a: r.g1("A")?,
        };
        r.finish()?;
        Ok(gsk)
    }
}

impl Wire for TracingProof {
    fn to_wire(&self) -> Vec<u8> {
        let mut w = Writer::default();
        w.g1(&self.k);
        w.scalar(&self.s);
        w.scalar(&self.c);
        w.scalar(&self.x);
        w.0
    }
    fn from_wire(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let pi = TracingProof {
            k: r.g1("K")?,
            s: r.scalar("s")?,
            c: r.scalar("c")?,
            x: r.scalar("x")?,
        };
        r.finish()?;
        Ok(pi)
    }
}

// ---------------------------------------------------------------------------
// Cursor helpers
// ---------------------------------------------------------------------------

#[derive(Default)]
pub(crate) struct Writer(pub(crate) Vec<u8>);

impl Writer {
    pub(crate) fn bytes(&mut self, b: &[u8]) {
        self.0.extend_from_slice(b);
    }
    pub(crate) fn u32(&mut self, v: u32) {
        self.bytes(&v.to_be_bytes());
    }
    pub(crate) fn var_bytes(&mut self, b: &[u8]) {
        self.u32(len_u32(b.len()));
        self.bytes(b);
    }
    pub(crate) fn scalar(&mut self, s: &Scalar) {
        self.bytes(&s.to_bytes());
    }
    pub(crate) fn g1(&mut self, p: &G1Element) {
        self.bytes(&p.to_compressed());
    }
    pub(crate) fn g2(&mut self, q: &G2Element) {
        self.bytes(&q.to_uncompressed());
    }
}

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub(crate) fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        let end = self.pos.checked_add(n).ok_or(DecodeError::Truncated)?;
        let out = self.buf.get(self.pos..end).ok_or(DecodeError::Truncated)?;
        self.pos = end;
        Ok(out)
    }

    fn array<const N: usize>(&mut self) -> Result<&'a [u8; N], DecodeError> {
        Ok(self.take(N)?.try_into().expect("take returned N bytes"))
    }

    pub(crate) fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.array::<1>()?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32, DecodeError> {
        Ok(u32::from_be_bytes(*self.array::<4>()?))
    }

    pub(crate) fn var_bytes(&mut self) -> Result<Vec<u8>, DecodeError> {
        let n = self.u32()? as usize;
        Ok(self.take(n)?.to_vec())
    }

    pub(crate) fn scalar(&mut self, field: &'static str) -> Result<Scalar, DecodeError> {
        Scalar::from_bytes(self.array::<32>()?).ok_or(DecodeError::Scalar(field))
    }

    pub(crate) fn nonzero_scalar(&mut self, field: &'static str) -> Result<Scalar, DecodeError> {
        let s = self.scalar(field)?;
        if s.is_zero() {
            return Err(DecodeError::Range(field));
        }
        Ok(s)
    }

    pub(crate) fn g1(&mut self, field: &'static str) -> Result<G1Element, DecodeError> {
        G1Element::from_compressed(self.array::<48>()?).map_err(|source| DecodeError::Point { field, source })
    }

    pub(crate) fn g1_uncompressed(&mut self, field: &'static str) -> Result<G1Element, DecodeError> {
        G1Element::from_uncompressed(self.array::<96>()?).map_err(|source| DecodeError::Point { field, source })
    }

    pub(crate) fn g2(&mut self, field: &'static str) -> Result<G2Element, DecodeError> {
        G2Element::from_uncompressed(self.array::<192>()?).map_err(|source| DecodeError::Point { field, source })
    }

    pub(crate) fn finish(self) -> Result<(), DecodeError> {
        match self.remaining() {
            0 => Ok(()),
            n => Err(DecodeError::Trailing(n)),
        }
    }
}
