/**
 * Structural types for the capture pipeline.
 *
 * Everything that touches the browser (camera, canvas, encoder, fetch) is
 * injected behind these interfaces so the pipeline logic runs and tests
 * headlessly with fakes.
 */

/** Anything with pixel dimensions that an encoder can consume. */
export interface Frame {
  readonly width: number;
  readonly height: number;
}

export interface BlobLike {
  readonly size: number;
}

/** Encodes a frame to JPEG bytes at a quality in [0, 1]. */
export type FrameEncoder<F extends Frame = Frame, B extends BlobLike = BlobLike> = (
  frame: F,
  quality: number,
) => Promise<B>;

/** Scales a frame to exact pixel dimensions (used for thumbnails). */
export type FrameScaler<F extends Frame = Frame> = (
  frame: F,
  width: number,
  height: number,
) => F;

export interface CompressionResult<B extends BlobLike = BlobLike> {
  mainBlob: B;
  /** Final quality; one of the fixed descending schedule values. */
  mainQuality: number;
  /** Byte length of the very first (highest quality) encoding attempt. */
  originalSize: number;
  /** Number of encodes performed. */
  iterations: number;
}

export class CameraError extends Error {
  constructor(
    readonly code:
      | "permission-denied"
      | "no-camera"
      | "stream-ended"
      | "encode-failure"
      | "network-failure",
    message: string,
  ) {
    super(message);
    this.name = "CameraError";
  }
}
