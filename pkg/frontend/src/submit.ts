import { CameraError, CompressionResult } from "./types";

export interface Gps {
  lat: number;
  lng: number;
}

export interface BlobPart {
  size: number;
}

export type FetchLike = (url: string, init: RequestInit) => Promise<Response>;

/**
 * Multipart body matching the server's upload contract exactly:
 * photo, thumbnail, original_size, and optional lat/lng.
 */
export function buildCaptureForm(
  result: CompressionResult<Blob>,
  thumb: Blob,
  gps: Gps | null,
): FormData {
  const form = new FormData();
  form.append("photo", result.mainBlob, "photo.jpg");
  form.append("thumbnail", thumb, "thumbnail.jpg");
  form.append("original_size", String(result.originalSize));
  if (gps) {
    form.append("lat", String(gps.lat));
    form.append("lng", String(gps.lng));
  }
  return form;
}

export interface SubmitOutcome {
  ok: boolean;
  status: number;
  fragmentHtml: string;
}

/**
 * POST the capture to the task-completion endpoint as a hypermedia request;
 * the response fragment replaces the task card on success and is surfaced
 * verbatim on rejection. Transport failures become retryable network errors.
 */
export async function submitCapture(
  fetchLike: FetchLike,
  endpoint: string,
  form: FormData,
): Promise<SubmitOutcome> {
  let response: Response;
  try {
    response = await fetchLike(endpoint, {
      method: "POST",
      body: form,
      headers: { "HX-Request": "true" },
      credentials: "same-origin",
    });
  } catch (err) {
    throw new CameraError("network-failure", `upload failed: ${String(err)}`);
  }
  const fragmentHtml = await response.text();
  return { ok: response.ok, status: response.status, fragmentHtml };
}
