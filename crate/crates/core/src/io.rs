//! PNG reading and writing. Output is always 8-bit RGB without alpha, with
//! fixed encoder settings so identical images give identical bytes.

use std::io::Cursor;
use std::path::Path;

use crate::color::{ImageBuffer, PixelSrgb};
use crate::{Error, Result};

/// Decodes any 8- or 16-bit PNG; alpha is dropped, gray is expanded.
pub fn decode_png(bytes: &[u8]) -> Result<ImageBuffer> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::normalize_to_color8());
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::Decode(e.to_string()))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Decode("image too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::Decode(e.to_string()))?;
    let buf = &buf[..info.buffer_size()];
    let channels = match info.color_type {
        png::ColorType::Grayscale => 1,
        png::ColorType::GrayscaleAlpha => 2,
        png::ColorType::Rgb => 3,
        png::ColorType::Rgba => 4,
        png::ColorType::Indexed => return Err(Error::Decode("unexpanded palette".into())),
    };
    let (w, h) = (info.width, info.height);
    let mut pixels = Vec::with_capacity(w as usize * h as usize);
    for row in buf.chunks_exact(info.line_size) {
        for px in row[..w as usize * channels].chunks_exact(channels) {
            pixels.push(match channels {
                1 | 2 => PixelSrgb::gray(px[0]),
                _ => PixelSrgb::new(px[0], px[1], px[2]),
            });
        }
    }
    ImageBuffer::new(w, h, pixels).map_err(|e| Error::Decode(e.to_string()))
}

pub fn encode_png(img: &ImageBuffer) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, img.width(), img.height());
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        encoder.set_compression(png::Compression::Fast);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::Encode(e.to_string()))?;
        writer
            .write_image_data(&img.to_rgb_bytes())
            .map_err(|e| Error::Encode(e.to_string()))?;
        writer.finish().map_err(|e| Error::Encode(e.to_string()))?;
    }
    Ok(out)
}

pub fn read_png(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let bytes = std::fs::read(path.as_ref())?;
    decode_png(&bytes)
}

pub fn write_png(path: impl AsRef<Path>, img: &ImageBuffer) -> Result<()> {
    std::fs::write(path.as_ref(), encode_png(img)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let img = ImageBuffer::from_fn(7, 3, |x, y| PixelSrgb::new(x as u8 * 30, y as u8 * 70, 5))
            .unwrap();
        let bytes = encode_png(&img).unwrap();
        assert_eq!(decode_png(&bytes).unwrap(), img);
        assert_eq!(encode_png(&decode_png(&bytes).unwrap()).unwrap(), bytes);
    }

    #[test]
    fn gray_and_alpha_inputs() {
        let mut gray = Vec::new();
        {
            let mut e = png::Encoder::new(&mut gray, 2, 1);
            e.set_color(png::ColorType::Grayscale);
            let mut w = e.write_header().unwrap();
            w.write_image_data(&[10, 200]).unwrap();
        }
        let img = decode_png(&gray).unwrap();
        assert_eq!(img.pixels(), &[PixelSrgb::gray(10), PixelSrgb::gray(200)]);

        let mut rgba = Vec::new();
        {
            let mut e = png::Encoder::new(&mut rgba, 1, 1);
            e.set_color(png::ColorType::Rgba);
            let mut w = e.write_header().unwrap();
            w.write_image_data(&[1, 2, 3, 0]).unwrap();
        }
        assert_eq!(
            decode_png(&rgba).unwrap().pixels(),
            &[PixelSrgb::new(1, 2, 3)]
        );
    }

    #[test]
    fn garbage_is_a_decode_error() {
        let err = decode_png(b"not a png").unwrap_err();
        assert_eq!(err.code(), "decode_failed");
    }
}
