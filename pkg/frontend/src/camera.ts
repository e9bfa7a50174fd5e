import { CameraError } from "./types";

/** The slice of MediaDevices the module touches. */
export interface MediaDevicesLike {
  getUserMedia(constraints: MediaStreamConstraints): Promise<MediaStream>;
}

export interface VideoSourceLike {
  readonly videoWidth: number;
  readonly videoHeight: number;
}

/** The slice of a 2D canvas the capture path uses. */
export interface Context2DLike {
  drawImage(source: VideoSourceLike, dx: number, dy: number, dw: number, dh: number): void;
  strokeStyle: string;
  lineWidth: number;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  clearRect(x: number, y: number, w: number, h: number): void;
}

export interface CanvasLike {
  width: number;
  height: number;
  getContext(kind: "2d"): Context2DLike | null;
}

export type CanvasFactory = (width: number, height: number) => CanvasLike;

export const STREAM_CONSTRAINTS: MediaStreamConstraints = {
  video: {
    facingMode: { ideal: "environment" },
    width: { ideal: 1920 },
    height: { ideal: 1080 },
  },
  audio: false,
};

/**
 * Open the rear camera at the ideal capture resolution; the browser
 * degrades to whatever the hardware offers.
 */
export async function acquireStream(mediaDevices: MediaDevicesLike): Promise<MediaStream> {
  try {
    return await mediaDevices.getUserMedia(STREAM_CONSTRAINTS);
  } catch (err) {
    const name = (err as DOMException)?.name ?? "";
    if (name === "NotAllowedError" || name === "SecurityError") {
      throw new CameraError("permission-denied", "camera permission was denied");
    }
    if (name === "NotFoundError" || name === "OverconstrainedError") {
      throw new CameraError("no-camera", "no usable camera was found");
    }
    throw new CameraError("no-camera", `camera acquisition failed: ${String(err)}`);
  }
}

/**
 * Rule-of-thirds guide, drawn on the preview overlay only. The capture path
 * never touches this canvas, so guide lines cannot leak into saved frames.
 */
export function drawGridOverlay(overlay: CanvasLike): void {
  const ctx = overlay.getContext("2d");
  if (!ctx) return;
  const { width, height } = overlay;
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "rgba(255,255,255,0.55)";
  ctx.lineWidth = 1;
  ctx.beginPath();
  for (const fraction of [1 / 3, 2 / 3]) {
    ctx.moveTo(width * fraction, 0);
    ctx.lineTo(width * fraction, height);
    ctx.moveTo(0, height * fraction);
    ctx.lineTo(width, height * fraction);
  }
  ctx.stroke();
}

/**
 * Grab one frame from the live video at its native resolution onto a fresh
 * canvas. Raises stream-ended when the source has no pixels to give.
 */
export function captureFrame(
  video: VideoSourceLike,
  createCanvas: CanvasFactory,
  streamLive: boolean,
): CanvasLike {
  if (!streamLive || video.videoWidth === 0 || video.videoHeight === 0) {
    throw new CameraError("stream-ended", "the camera stream has ended");
  }
  const canvas = createCanvas(video.videoWidth, video.videoHeight);
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    throw new CameraError("encode-failure", "2d canvas context unavailable");
  }
  ctx.drawImage(video, 0, 0, video.videoWidth, video.videoHeight);
  return canvas;
}
