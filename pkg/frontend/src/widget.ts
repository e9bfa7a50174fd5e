import { acquireStream, CanvasLike, captureFrame, drawGridOverlay } from "./camera";
import { compressToTarget } from "./compress";
import { makeThumbnail } from "./thumbnail";
import { buildCaptureForm, Gps, submitCapture } from "./submit";
import { CameraError } from "./types";

/** Encode a canvas to a JPEG blob at the given quality. */
function encodeCanvas(canvas: HTMLCanvasElement, quality: number): Promise<Blob> {
  return new Promise((resolve, reject) => {
    canvas.toBlob(
      (blob) => (blob ? resolve(blob) : reject(new Error("toBlob returned null"))),
      "image/jpeg",
      quality,
    );
  });
}

function scaleCanvas(canvas: HTMLCanvasElement, width: number, height: number): HTMLCanvasElement {
  const scaled = document.createElement("canvas");
  scaled.width = width;
  scaled.height = height;
  scaled.getContext("2d")?.drawImage(canvas, 0, 0, width, height);
  return scaled;
}

function sampleGps(): Promise<Gps | null> {
  return new Promise((resolve) => {
    if (!navigator.geolocation) {
      resolve(null);
      return;
    }
    navigator.geolocation.getCurrentPosition(
      (position) => resolve({ lat: position.coords.latitude, lng: position.coords.longitude }),
      () => resolve(null),
      { timeout: 4000, maximumAge: 60_000 },
    );
  });
}

function swapTaskDetail(fragmentHtml: string): void {
  const target = document.getElementById("task-detail");
  if (target) {
    target.outerHTML = fragmentHtml;
  }
}

export function attachWidget(mount: HTMLElement): void {
  if (mount.dataset.cameraReady === "1") return;
  mount.dataset.cameraReady = "1";
  const endpoint =
    mount.dataset.endpoint ?? `/housekeeping/tasks/${mount.dataset.recordId}/complete`;

  const open = document.createElement("button");
  open.type = "button";
  open.className = "btn btn-sm btn-outline camera-open";
  open.textContent = "Use camera";
  const status = document.createElement("p");
  status.className = "camera-status text-muted";
  mount.append(open, status);

  let stream: MediaStream | null = null;

  const stop = () => {
    stream?.getTracks().forEach((track) => track.stop());
    stream = null;
  };

  open.addEventListener("click", async () => {
    try {
      stream = await acquireStream(navigator.mediaDevices);
    } catch (err) {
      status.textContent =
        err instanceof CameraError && err.code === "permission-denied"
          ? "Camera permission denied; use the file inputs below instead."
          : "No camera available; use the file inputs below instead.";
      return;
    }
    open.hidden = true;

    const stage = document.createElement("div");
    stage.className = "camera-stage";
    const video = document.createElement("video");
    video.playsInline = true;
    video.muted = true;
    video.srcObject = stream;
    const overlay = document.createElement("canvas");
    overlay.className = "camera-overlay";
    const shutter = document.createElement("button");
    shutter.type = "button";
    shutter.className = "btn btn-primary camera-shutter";
    shutter.textContent = "Capture photo";
    stage.append(video, overlay);
    mount.append(stage, shutter);

    video.addEventListener("loadedmetadata", () => {
      overlay.width = video.videoWidth;
      overlay.height = video.videoHeight;
      // preview-only; never drawn into captures
      drawGridOverlay(overlay as unknown as CanvasLike);
    });
    await video.play();

    shutter.addEventListener("click", async () => {
      shutter.disabled = true; // one capture pipeline at a time
      status.textContent = "Compressing…";
      try {
        const gps = await sampleGps(); // sampled at shutter press
        const frame = captureFrame(
          video,
          (w, h) => {
            const canvas = document.createElement("canvas");
            canvas.width = w;
            canvas.height = h;
            return canvas as unknown as CanvasLike;
          },
          stream !== null && stream.active,
        ) as unknown as HTMLCanvasElement;

        const result = await compressToTarget(frame, encodeCanvas);
        const thumb = await makeThumbnail(frame, scaleCanvas, encodeCanvas);
        status.textContent = `Uploading (${Math.round(result.mainBlob.size / 1024)} KB at q=${result.mainQuality.toFixed(2)})…`;

        const outcome = await submitCapture(
          (url, init) => fetch(url, init),
          endpoint,
          buildCaptureForm(result, thumb, gps),
        );
        if (outcome.ok) {
          stop();
          swapTaskDetail(outcome.fragmentHtml);
          return;
        }
        // server rejection: surface the returned fragment, keep the form usable
        status.innerHTML = outcome.fragmentHtml;
        shutter.disabled = false;
      } catch (err) {
        shutter.disabled = false;
        if (err instanceof CameraError && err.code === "network-failure") {
          status.textContent = "Upload failed: no connection. Check campus WiFi and retry.";
          shutter.textContent = "Retry capture";
          return;
        }
        status.textContent = err instanceof Error ? err.message : String(err);
      }
    });
  });
}

export function attachAll(root: ParentNode = document): void {
  root.querySelectorAll<HTMLElement>("[data-camera-capture]").forEach(attachWidget);
}
