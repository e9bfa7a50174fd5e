import { attachAll } from "./widget";

export { acquireStream, captureFrame, drawGridOverlay, STREAM_CONSTRAINTS } from "./camera";
export { compressToTarget, QUALITY_SCHEDULE, TARGET_BYTES } from "./compress";
export { makeThumbnail, thumbnailDimensions, THUMB_MAX_DIM, THUMB_QUALITY } from "./thumbnail";
export { buildCaptureForm, submitCapture } from "./submit";
export { attachAll, attachWidget } from "./widget";
export { CameraError } from "./types";
export type { CompressionResult, Frame, FrameEncoder } from "./types";

// camera mounts appear inside swapped fragments too, so re-attach after
// htmx settles new content into the DOM
if (typeof document !== "undefined") {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", () => attachAll());
  } else {
    attachAll();
  }
  document.body?.addEventListener("htmx:afterSettle", (event) => {
    const target = event.target;
    if (target instanceof HTMLElement) {
      attachAll(target);
    }
  });
}
