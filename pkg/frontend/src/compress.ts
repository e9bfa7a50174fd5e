import { BlobLike, CameraError, CompressionResult, Frame, FrameEncoder } from "./types";

export const TARGET_BYTES = 300_000;

/**
 * Fixed descending quality schedule, 0.85 down to 0.35 in steps of 0.05.
 * Built from integer hundredths so the values are exact decimals.
 */
export const QUALITY_SCHEDULE: readonly number[] = Object.freeze(
  Array.from({ length: 11 }, (_, i) => (85 - 5 * i) / 100),
);

/**
 * Encode at the top of the schedule, then walk down until the blob fits the
 * byte target or the floor quality is reached. Termination comes from the
 * schedule bound alone; nothing assumes blob size falls monotonically with
 * quality. The first attempt's byte length is reported as the original size
 * (the raw frame has no canonical encoding to measure).
 */
export async function compressToTarget<F extends Frame, B extends BlobLike>(
  frame: F,
  encoder: FrameEncoder<F, B>,
  targetBytes: number = TARGET_BYTES,
): Promise<CompressionResult<B>> {
  let originalSize = 0;
  let attempt: B | null = null;
  let quality = QUALITY_SCHEDULE[0];
  let iterations = 0;

  for (const q of QUALITY_SCHEDULE) {
    quality = q;
    try {
      attempt = await encoder(frame, q);
    } catch (err) {
      throw new CameraError("encode-failure", `JPEG encode failed at q=${q}: ${String(err)}`);
    }
    iterations += 1;
    if (iterations === 1) {
      originalSize = attempt.size;
    }
    if (attempt.size <= targetBytes) {
      return { mainBlob: attempt, mainQuality: q, originalSize, iterations };
    }
  }
  // floor reached: return the last (lowest quality) attempt as-is
  return { mainBlob: attempt as B, mainQuality: quality, originalSize, iterations };
}
