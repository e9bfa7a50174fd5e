import { describe, expect, it } from "vitest";

import { compressToTarget, QUALITY_SCHEDULE, TARGET_BYTES } from "../src/compress";
import { CameraError, Frame, FrameEncoder } from "../src/types";

const frame: Frame = { width: 1920, height: 1080 };

/** Encoder spy: records the qualities attempted, yields scripted sizes. */
function spyEncoder(sizes: (quality: number, attempt: number) => number) {
  const attempted: number[] = [];
  const encoder: FrameEncoder = async (_frame, quality) => {
    attempted.push(quality);
    return { size: sizes(quality, attempted.length) };
  };
  return { encoder, attempted };
}

describe("quality schedule", () => {
  it("is exactly 0.85 down to 0.35 in steps of 0.05", () => {
    expect(QUALITY_SCHEDULE).toHaveLength(11);
    expect(QUALITY_SCHEDULE[0]).toBe(0.85);
    expect(QUALITY_SCHEDULE[10]).toBe(0.35);
    for (let i = 1; i < QUALITY_SCHEDULE.length; i++) {
      expect(Math.round((QUALITY_SCHEDULE[i - 1] - QUALITY_SCHEDULE[i]) * 100)).toBe(5);
    }
  });
});

describe("compressToTarget", () => {
  it("returns the first encoding when it already fits", async () => {
    const { encoder, attempted } = spyEncoder(() => 180_000);
    const result = await compressToTarget(frame, encoder);
    expect(result.iterations).toBe(1);
    expect(result.mainQuality).toBe(0.85);
    expect(result.originalSize).toBe(180_000);
    expect(result.mainBlob.size).toBe(180_000);
    expect(attempted).toEqual([0.85]);
  });

  it("walks a strict prefix of the schedule until the blob fits", async () => {
    // sizes shrink with quality; fits at 0.65
    const { encoder, attempted } = spyEncoder((q) => Math.round(q * 450_000));
    const result = await compressToTarget(frame, encoder);
    expect(attempted).toEqual(QUALITY_SCHEDULE.slice(0, attempted.length));
    expect(result.mainQuality).toBe(attempted[attempted.length - 1]);
    expect(result.mainBlob.size).toBeLessThanOrEqual(TARGET_BYTES);
    expect(result.originalSize).toBe(Math.round(0.85 * 450_000));
    expect(result.iterations).toBe(attempted.length);
  });

  it("stops at the 0.35 floor when nothing fits, 11 iterations maximum", async () => {
    const { encoder, attempted } = spyEncoder(() => 900_000);
    const result = await compressToTarget(frame, encoder);
    expect(attempted).toEqual([...QUALITY_SCHEDULE]);
    expect(result.iterations).toBe(11);
    expect(result.mainQuality).toBe(0.35);
    expect(result.mainBlob.size).toBe(900_000);
  });

  it("terminates by the schedule alone even when sizes are not monotone", async () => {
    // bouncing sizes: the loop must not rely on monotonicity
    const { encoder, attempted } = spyEncoder((_q, attempt) =>
      attempt % 2 === 1 ? 500_000 : 600_000,
    );
    const result = await compressToTarget(frame, encoder);
    expect(result.iterations).toBe(11);
    expect(attempted).toEqual([...QUALITY_SCHEDULE]);
    expect(result.mainQuality).toBe(0.35);
  });

  it("returns the first fitting blob, not the smallest seen", async () => {
    const sizesByAttempt = [400_000, 310_000, 299_999, 100_000];
    const { encoder } = spyEncoder((_q, attempt) => sizesByAttempt[attempt - 1] ?? 50_000);
    const result = await compressToTarget(frame, encoder);
    expect(result.iterations).toBe(3);
    expect(result.mainBlob.size).toBe(299_999);
    expect(result.mainQuality).toBe(0.75);
  });

  it("honors a custom byte target", async () => {
    const { encoder } = spyEncoder((q) => Math.round(q * 100_000));
    const result = await compressToTarget(frame, encoder, 50_000);
    expect(result.mainBlob.size).toBeLessThanOrEqual(50_000);
  });

  it("high-entropy frames end at the target or the floor", async () => {
    // deterministic stand-in for encoding 1920x1080 noise: high-entropy
    // content compresses badly, so sizes stay large at every quality
    const entropyBytes = frame.width * frame.height * 0.45;
    const { encoder, attempted } = spyEncoder((q) => Math.round(entropyBytes * q));
    const result = await compressToTarget(frame, encoder);
    const strictlyDescending = attempted.every(
      (q, i) => i === 0 || Math.round((attempted[i - 1] - q) * 100) === 5,
    );
    expect(strictlyDescending).toBe(true);
    expect(result.mainBlob.size <= TARGET_BYTES || result.mainQuality === 0.35).toBe(true);
  });

  it("wraps encoder failures as encode-failure", async () => {
    const encoder: FrameEncoder = async () => {
      throw new Error("boom");
    };
    await expect(compressToTarget(frame, encoder)).rejects.toMatchObject({
      code: "encode-failure",
    });
    await expect(compressToTarget(frame, encoder)).rejects.toBeInstanceOf(CameraError);
  });
});
