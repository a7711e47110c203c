use std::fs;
use std::path::Path;

use hitviz_core::imaging::ImageTensor;

use crate::{Error, Result};

/// 8-bit, non-interlaced PNG bytes: RGB for 3 channels, grayscale for 1.
/// Each channel byte is `round(value * 255)`.
pub fn encode_png(img: &ImageTensor) -> Result<Vec<u8>> {
    let color = match img.channels {
        1 => png::ColorType::Grayscale,
        3 => png::ColorType::Rgb,
        c => return Err(Error::Png(format!("unsupported channel count {c}"))),
    };
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width as u32, img.height as u32);
        enc.set_color(color);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header().map_err(|e| Error::Png(e.to_string()))?;
        writer
            .write_image_data(&img.to_bytes())
            .map_err(|e| Error::Png(e.to_string()))?;
    }
    Ok(out)
}

pub fn write_png(img: &ImageTensor, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_png(img)?).map_err(|e| Error::io(path, e))
}
