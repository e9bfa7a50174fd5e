import { describe, expect, it } from "vitest";

import {
  acquireStream,
  CanvasLike,
  captureFrame,
  Context2DLike,
  drawGridOverlay,
  STREAM_CONSTRAINTS,
  VideoSourceLike,
} from "../src/camera";

/**
 * Canvas fake with a real pixel model: drawImage floods the buffer with the
 * source's solid color; stroke marks every pixel the grid lines cross.
 */
class FakeCanvas implements CanvasLike {
  pixels: string[];
  private pending: Array<[number, number, number, number]> = [];
  private ctx: Context2DLike;

  constructor(
    public width: number,
    public height: number,
  ) {
    this.pixels = new Array(width * height).fill("");
    const canvas = this;
    this.ctx = {
      strokeStyle: "",
      lineWidth: 1,
      drawImage(source: VideoSourceLike) {
        const color = (source as SolidVideo).color;
        canvas.pixels.fill(color);
      },
      beginPath() {
        canvas.pending = [];
      },
      moveTo(x: number, y: number) {
        canvas.pending.push([x, y, x, y]);
      },
      lineTo(x: number, y: number) {
        const last = canvas.pending[canvas.pending.length - 1];
        if (last) {
          last[2] = x;
          last[3] = y;
        }
      },
      stroke() {
        for (const [x0, y0, x1, y1] of canvas.pending) {
          canvas.paintLine(x0, y0, x1, y1, String(this.strokeStyle));
        }
      },
      clearRect() {
        canvas.pixels.fill("");
      },
    };
  }

  paintLine(x0: number, y0: number, x1: number, y1: number, color: string): void {
    const steps = Math.max(Math.abs(x1 - x0), Math.abs(y1 - y0), 1);
    for (let i = 0; i <= steps; i++) {
      const x = Math.min(this.width - 1, Math.floor(x0 + ((x1 - x0) * i) / steps));
      const y = Math.min(this.height - 1, Math.floor(y0 + ((y1 - y0) * i) / steps));
      this.pixels[y * this.width + x] = color;
    }
  }

  getContext(kind: "2d"): Context2DLike | null {
    return kind === "2d" ? this.ctx : null;
  }

  uniformColor(): string | null {
    const first = this.pixels[0];
    return this.pixels.every((p) => p === first) ? first : null;
  }
}

class SolidVideo implements VideoSourceLike {
  constructor(
    public videoWidth: number,
    public videoHeight: number,
    public color: string,
  ) {}
}

function deviceRejecting(name: string) {
  return {
    getUserMedia: async () => {
      const err = new Error(name);
      (err as unknown as { name: string }).name = name;
      throw err;
    },
  };
}

describe("acquireStream", () => {
  it("asks for the rear camera at the ideal capture resolution", async () => {
    let seen: MediaStreamConstraints | null = null;
    const fakeStream = { id: "s1" } as unknown as MediaStream;
    const devices = {
      getUserMedia: async (constraints: MediaStreamConstraints) => {
        seen = constraints;
        return fakeStream;
      },
    };
    const stream = await acquireStream(devices);
    expect(stream).toBe(fakeStream);
    expect(seen).toEqual(STREAM_CONSTRAINTS);
    const video = (seen as unknown as { video: Record<string, unknown> }).video;
    expect(video.facingMode).toEqual({ ideal: "environment" });
    expect(video.width).toEqual({ ideal: 1920 });
    expect(video.height).toEqual({ ideal: 1080 });
  });

  it("maps a denial to permission-denied", async () => {
    await expect(acquireStream(deviceRejecting("NotAllowedError"))).rejects.toMatchObject({
      code: "permission-denied",
    });
  });

  it("maps a missing device to no-camera", async () => {
    await expect(acquireStream(deviceRejecting("NotFoundError"))).rejects.toMatchObject({
      code: "no-camera",
    });
  });
});

describe("captureFrame", () => {
  const makeCanvas = (w: number, h: number) => new FakeCanvas(w, h);

  it("captures at the native stream resolution", () => {
    const video = new SolidVideo(1920, 1080, "teal");
    const frame = captureFrame(video, makeCanvas, true) as FakeCanvas;
    expect(frame.width).toBe(1920);
    expect(frame.height).toBe(1080);
  });

  it("degrades to whatever resolution the webcam delivers", () => {
    const video = new SolidVideo(640, 480, "gray");
    const frame = captureFrame(video, makeCanvas, true) as FakeCanvas;
    expect([frame.width, frame.height]).toEqual([640, 480]);
  });

  it("raises stream-ended for a dead stream", () => {
    const video = new SolidVideo(1920, 1080, "teal");
    expect(() => captureFrame(video, makeCanvas, false)).toThrowError(/ended/);
    const empty = new SolidVideo(0, 0, "teal");
    expect(() => captureFrame(empty, makeCanvas, true)).toThrowError(/ended/);
  });

  it("keeps the rule-of-thirds overlay out of captured pixels", () => {
    // preview path: overlay canvas carries the grid
    const overlay = new FakeCanvas(120, 90);
    const overlayCtx = overlay.getContext("2d")!;
    overlayCtx.drawImage(new SolidVideo(120, 90, "#445566"), 0, 0, 120, 90);
    drawGridOverlay(overlay);
    expect(overlay.uniformColor()).toBeNull(); // grid visible in the preview

    // capture path: fresh canvas, solid-color synthetic stream
    const video = new SolidVideo(120, 90, "#445566");
    const frame = captureFrame(video, makeCanvas, true) as FakeCanvas;
    expect(frame.uniformColor()).toBe("#445566"); // no grid lines leaked
  });
});
