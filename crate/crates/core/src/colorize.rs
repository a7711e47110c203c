//! Byte-to-color encoding schemes.
//!
//! | scheme      | pixel for byte `v` at position `i`                        |
//! |-------------|-----------------------------------------------------------|
//! | Gray        | `(v, v, v)`                                               |
//! | ByteClass   | fixed palette for zero / 0xFF / printable / other         |
//! | Gradient    | HSV hue `v/255 * 240°`, full saturation and value         |
//! | Hilbert     | [`byte_to_rgb_hilbert`]                                   |
//! | Entropy     | `(e, 0, e)` with `e = round(255 * h_i)`                   |
//! | Hit         | `(e, green(v), e)`, green level from a [`PartitionTable`] |
//!
//! `h_i` is the normalized entropy profile value at position `i`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::entropy::EntropyProfile;
use crate::hilbert::{byte_to_rgb_hilbert, Rgb};
use crate::{Error, Result};

/// Number of byte-value partitions feeding the HIT green channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cut {
    Four = 4,
    Eight = 8,
    Sixteen = 16,
}

impl Cut {
    pub const ALL: [Cut; 3] = [Cut::Four, Cut::Eight, Cut::Sixteen];

    pub fn count(self) -> usize {
        self as usize
    }
}

impl TryFrom<u32> for Cut {
    type Error = Error;

    fn try_from(v: u32) -> Result<Self> {
        match v {
            4 => Ok(Cut::Four),
            8 => Ok(Cut::Eight),
            16 => Ok(Cut::Sixteen),
            other => Err(Error::UnsupportedCut(other)),
        }
    }
}

/// Letter ranges used by the partition table. `Literal` stops at `w`/`W`
/// (x–z and X–Z then count as other printable characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LetterRanges {
    #[default]
    Full,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Gray,
    ByteClass,
    Gradient,
    HilbertColor,
    Entropy,
    Hit { cut: Cut, letters: LetterRanges },
}

impl Scheme {
    pub const fn hit(cut: Cut) -> Scheme {
        Scheme::Hit {
            cut,
            letters: LetterRanges::Full,
        }
    }

    /// The six schemes, HIT at cut 8.
    pub const ALL: [Scheme; 6] = [
        Scheme::ByteClass,
        Scheme::Gray,
        Scheme::HilbertColor,
        Scheme::Gradient,
        Scheme::Entropy,
        Scheme::hit(Cut::Eight),
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Gray => "gray",
            Scheme::ByteClass => "byteclass",
            Scheme::Gradient => "gradient",
            Scheme::HilbertColor => "hilbert",
            Scheme::Entropy => "entropy",
            Scheme::Hit { .. } => "hit",
        }
    }

    pub fn needs_entropy(&self) -> bool {
        matches!(self, Scheme::Entropy | Scheme::Hit { .. })
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Hit { cut, .. } => write!(f, "hit{}", cut.count()),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    /// Accepts the scheme names; `hit` defaults to cut 8 and `hit4`, `hit8`,
    /// `hit16` select the cut explicitly.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gray" => Ok(Scheme::Gray),
            "byteclass" | "class" => Ok(Scheme::ByteClass),
            "gradient" => Ok(Scheme::Gradient),
            "hilbert" => Ok(Scheme::HilbertColor),
            "entropy" => Ok(Scheme::Entropy),
            "hit" => Ok(Scheme::hit(Cut::Eight)),
            _ => match s.strip_prefix("hit").and_then(|c| c.parse::<u32>().ok()) {
                Some(c) => Ok(Scheme::hit(Cut::try_from(c)?)),
                None => Err(Error::BadConfig("unknown scheme")),
            },
        }
    }
}

fn is_printable(v: u8) -> bool {
    (0x20..=0x7E).contains(&v) || matches!(v, 0x09 | 0x0A | 0x0D)
}

fn is_whitespace(v: u8) -> bool {
    matches!(v, 0x20 | 0x09 | 0x0A | 0x0D)
}

/// Byte value → (class id, green level) for the HIT green channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    pub cut: Cut,
    pub green_level: [u8; 256],
    pub class_id: [u8; 256],
}

impl PartitionTable {
    pub fn new(cut: Cut) -> Self {
        Self::with_letters(cut, LetterRanges::Full)
    }

    pub fn with_letters(cut: Cut, letters: LetterRanges) -> Self {
        let last = match letters {
            LetterRanges::Full => b'z',
            LetterRanges::Literal => b'w',
        };
        let lower = |v: u8| (b'a'..=last).contains(&v);
        let upper = |v: u8| (b'A'..=last.to_ascii_uppercase()).contains(&v);

        let mut green_level = [0u8; 256];
        let mut class_id = [0u8; 256];
        for v in 0..=255u8 {
            let (id, green) = match cut {
                Cut::Four => match v {
                    0x00 => (0, 0),
                    0xFF => (1, 255),
                    _ if is_printable(v) => (2, 126),
                    _ => (3, 16),
                },
                Cut::Eight => match v {
                    0x00 => (0, 0),
                    0xFF => (1, 255),
                    _ if lower(v) => (2, 126),
                    _ if upper(v) => (3, 64),
                    b'0'..=b'9' => (4, 32),
                    _ if is_printable(v) => (5, 16),
                    0x80..=0xFE => (7, 4),
                    _ => (6, 8),
                },
                Cut::Sixteen => match v {
                    0x00 => (0, 0),
                    0xFF => (1, 255),
                    b'a'..=b'm' => (2, 126),
                    _ if lower(v) => (3, 110),
                    b'A'..=b'M' => (4, 64),
                    _ if upper(v) => (5, 48),
                    b'0'..=b'4' => (6, 32),
                    b'5'..=b'9' => (7, 24),
                    _ if is_whitespace(v) => (8, 20),
                    _ if is_printable(v) => (9, 16),
                    0x01..=0x0F => (10, 8),
                    0x10..=0x1F | 0x7F => (11, 6),
                    0x80..=0x9F => (12, 4),
                    0xA0..=0xBF => (13, 3),
                    0xC0..=0xDF => (14, 2),
                    _ => (15, 1),
                },
            };
            class_id[v as usize] = id;
            green_level[v as usize] = green;
        }
        Self {
            cut,
            green_level,
            class_id,
        }
    }

    pub fn distinct_classes(&self) -> usize {
        let mut seen = [false; 256];
        for &c in &self.class_id {
            seen[c as usize] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }
}

/// `cut` must be 4, 8 or 16.
pub fn build_partition_table(cut: u32) -> Result<PartitionTable> {
    Ok(PartitionTable::new(Cut::try_from(cut)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PixelSequence {
    pub pixels: Vec<Rgb>,
    pub scheme: Scheme,
}

impl PixelSequence {
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }
}

pub const BYTECLASS_ZERO: Rgb = Rgb::new(0, 0, 0);
pub const BYTECLASS_MAX: Rgb = Rgb::new(255, 255, 255);
pub const BYTECLASS_PRINTABLE: Rgb = Rgb::new(55, 126, 184);
pub const BYTECLASS_OTHER: Rgb = Rgb::new(228, 26, 28);

pub fn byteclass_color(v: u8) -> Rgb {
    match v {
        0x00 => BYTECLASS_ZERO,
        0xFF => BYTECLASS_MAX,
        _ if is_printable(v) => BYTECLASS_PRINTABLE,
        _ => BYTECLASS_OTHER,
    }
}

/// HSV to RGB for `hue` in degrees and saturation/value in [0, 1].
pub fn hsv_to_rgb(hue: f64, saturation: f64, value: f64) -> Rgb {
    let c = value * saturation;
    let h = libm::fmod(hue, 360.0) / 60.0;
    let x = c * (1.0 - libm::fabs(libm::fmod(h, 2.0) - 1.0));
    let (r, g, b) = match h as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = value - c;
    let q = |ch: f64| libm::round((ch + m) * 255.0) as u8;
    Rgb::new(q(r), q(g), q(b))
}

pub fn gradient_color(v: u8) -> Rgb {
    hsv_to_rgb(f64::from(v) / 255.0 * 240.0, 1.0, 1.0)
}

fn entropy_level(h: f64) -> u8 {
    libm::round(255.0 * h.clamp(0.0, 1.0)) as u8
}

/// Color every byte of `bytes`. Entropy and HIT need a profile of matching
/// length.
pub fn encode(
    bytes: &[u8],
    scheme: Scheme,
    profile: Option<&EntropyProfile>,
) -> Result<PixelSequence> {
    if bytes.is_empty() {
        return Err(Error::EmptyStream);
    }
    let entropy = if scheme.needs_entropy() {
        let p = profile.ok_or(Error::ProfileMismatch {
            stream: bytes.len(),
            profile: 0,
        })?;
        if p.len() != bytes.len() {
            return Err(Error::ProfileMismatch {
                stream: bytes.len(),
                profile: p.len(),
            });
        }
        p.values.as_slice()
    } else {
        &[]
    };

    let pixels = match scheme {
        Scheme::Gray => bytes.iter().map(|&v| Rgb::new(v, v, v)).collect(),
        Scheme::ByteClass => bytes.iter().map(|&v| byteclass_color(v)).collect(),
        Scheme::Gradient => {
            let lut: Vec<Rgb> = (0..=255u8).map(gradient_color).collect();
            bytes.iter().map(|&v| lut[v as usize]).collect()
        }
        Scheme::HilbertColor => {
            let lut: Vec<Rgb> = (0..=255u8).map(byte_to_rgb_hilbert).collect();
            bytes.iter().map(|&v| lut[v as usize]).collect()
        }
        Scheme::Entropy => entropy
            .iter()
            .map(|&h| {
                let e = entropy_level(h);
                Rgb::new(e, 0, e)
            })
            .collect(),
        Scheme::Hit { cut, letters } => {
            let table = PartitionTable::with_letters(cut, letters);
            bytes
                .iter()
                .zip(entropy)
                .map(|(&v, &h)| {
                    let e = entropy_level(h);
                    Rgb::new(e, table.green_level[v as usize], e)
                })
                .collect()
        }
    };
    Ok(PixelSequence { pixels, scheme })
}
