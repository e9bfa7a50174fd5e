import { describe, expect, it } from "vitest";

import { buildCaptureForm, submitCapture } from "../src/submit";
import { CompressionResult } from "../src/types";

function sampleResult(): CompressionResult<Blob> {
  return {
    mainBlob: new Blob([new Uint8Array(2048)], { type: "image/jpeg" }),
    mainQuality: 0.8,
    originalSize: 3_100_000,
    iterations: 2,
  };
}

describe("buildCaptureForm", () => {
  it("carries exactly the upload contract fields", () => {
    const thumb = new Blob([new Uint8Array(256)], { type: "image/jpeg" });
    const form = buildCaptureForm(sampleResult(), thumb, { lat: 23.21, lng: 72.68 });
    expect([...form.keys()].sort()).toEqual(["lat", "lng", "original_size", "photo", "thumbnail"]);
    expect(form.get("original_size")).toBe("3100000");
    expect(form.get("lat")).toBe("23.21");
    expect(form.get("lng")).toBe("72.68");
    expect((form.get("photo") as File).size).toBe(2048);
    expect((form.get("thumbnail") as File).size).toBe(256);
  });

  it("omits gps fields when no fix is available", () => {
    const thumb = new Blob([new Uint8Array(1)]);
    const form = buildCaptureForm(sampleResult(), thumb, null);
    expect([...form.keys()].sort()).toEqual(["original_size", "photo", "thumbnail"]);
  });
});

describe("submitCapture", () => {
  it("posts multipart with the hypermedia marker and returns the fragment", async () => {
    let captured: { url: string; init: RequestInit } | null = null;
    const fetchLike = async (url: string, init: RequestInit) => {
      captured = { url, init };
      return new Response('<div id="task-detail">done</div>', { status: 200 });
    };
    const form = buildCaptureForm(sampleResult(), new Blob([new Uint8Array(1)]), null);
    const outcome = await submitCapture(fetchLike, "/housekeeping/tasks/7/complete", form);
    expect(outcome.ok).toBe(true);
    expect(outcome.fragmentHtml).toContain("task-detail");
    expect(captured!.url).toBe("/housekeeping/tasks/7/complete");
    expect(captured!.init.method).toBe("POST");
    expect((captured!.init.headers as Record<string, string>)["HX-Request"]).toBe("true");
    expect(captured!.init.body).toBe(form);
  });

  it("surfaces server rejections verbatim without throwing", async () => {
    const fetchLike = async () =>
      new Response('<div class="error-box" data-error-code="photo-required">need photo</div>', {
        status: 400,
      });
    const form = buildCaptureForm(sampleResult(), new Blob([new Uint8Array(1)]), null);
    const outcome = await submitCapture(fetchLike, "/housekeeping/tasks/7/complete", form);
    expect(outcome.ok).toBe(false);
    expect(outcome.status).toBe(400);
    expect(outcome.fragmentHtml).toContain("photo-required");
  });

  it("wraps transport errors as retryable network failures", async () => {
    const fetchLike = async () => {
      throw new TypeError("fetch failed");
    };
    const form = buildCaptureForm(sampleResult(), new Blob([new Uint8Array(1)]), null);
    await expect(
      submitCapture(fetchLike, "/housekeeping/tasks/7/complete", form),
    ).rejects.toMatchObject({ code: "network-failure" });
  });
});
