import { BlobLike, CameraError, Frame, FrameEncoder, FrameScaler } from "./types";

export const THUMB_MAX_DIM = 300;
export const THUMB_QUALITY = 0.7;

/** Round half up: the tie 0.5 always goes toward the larger dimension. */
function roundHalfUp(value: number): number {
  return Math.floor(value + 0.5);
}

/**
 * Aspect-preserving downscale so the longer side is at most the bound.
 * Never upscales; each dimension rounds half-up with a floor of one pixel.
 */
export function thumbnailDimensions(
  width: number,
  height: number,
  maxDim: number = THUMB_MAX_DIM,
): { width: number; height: number } {
  const scale = Math.min(1, maxDim / Math.max(width, height));
  return {
    width: Math.max(1, roundHalfUp(width * scale)),
    height: Math.max(1, roundHalfUp(height * scale)),
  };
}

export async function makeThumbnail<F extends Frame, B extends BlobLike>(
  frame: F,
  scaler: FrameScaler<F>,
  encoder: FrameEncoder<F, B>,
): Promise<B> {
  const dims = thumbnailDimensions(frame.width, frame.height);
  const scaled = scaler(frame, dims.width, dims.height);
  try {
    return await encoder(scaled, THUMB_QUALITY);
  } catch (err) {
    throw new CameraError("encode-failure", `thumbnail encode failed: ${String(err)}`);
  }
}
