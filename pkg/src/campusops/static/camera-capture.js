var CampusOpsCamera = (function(exports) {
	Object.defineProperty(exports, Symbol.toStringTag, { value: "Module" });
	//#region src/types.ts
	var CameraError = class extends Error {
		constructor(code, message) {
			super(message);
			this.code = code;
			this.name = "CameraError";
		}
	};
	//#endregion
	//#region src/camera.ts
	var STREAM_CONSTRAINTS = {
		video: {
			facingMode: { ideal: "environment" },
			width: { ideal: 1920 },
			height: { ideal: 1080 }
		},
		audio: false
	};
	/**
	* Open the rear camera at the ideal capture resolution; the browser
	* degrades to whatever the hardware offers.
	*/
	async function acquireStream(mediaDevices) {
		try {
			return await mediaDevices.getUserMedia(STREAM_CONSTRAINTS);
		} catch (err) {
			const name = err?.name ?? "";
			if (name === "NotAllowedError" || name === "SecurityError") throw new CameraError("permission-denied", "camera permission was denied");
			if (name === "NotFoundError" || name === "OverconstrainedError") throw new CameraError("no-camera", "no usable camera was found");
			throw new CameraError("no-camera", `camera acquisition failed: ${String(err)}`);
		}
	}
	/**
	* Rule-of-thirds guide, drawn on the preview overlay only. The capture path
	* never touches this canvas, so guide lines cannot leak into saved frames.
	*/
	function drawGridOverlay(overlay) {
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
	function captureFrame(video, createCanvas, streamLive) {
		if (!streamLive || video.videoWidth === 0 || video.videoHeight === 0) throw new CameraError("stream-ended", "the camera stream has ended");
		const canvas = createCanvas(video.videoWidth, video.videoHeight);
		const ctx = canvas.getContext("2d");
		if (!ctx) throw new CameraError("encode-failure", "2d canvas context unavailable");
		ctx.drawImage(video, 0, 0, video.videoWidth, video.videoHeight);
		return canvas;
	}
	//#endregion
	//#region src/compress.ts
	var TARGET_BYTES = 3e5;
	/**
	* Fixed descending quality schedule, 0.85 down to 0.35 in steps of 0.05.
	* Built from integer hundredths so the values are exact decimals.
	*/
	var QUALITY_SCHEDULE = Object.freeze(Array.from({ length: 11 }, (_, i) => (85 - 5 * i) / 100));
	/**
	* Encode at the top of the schedule, then walk down until the blob fits the
	* byte target or the floor quality is reached. Termination comes from the
	* schedule bound alone; nothing assumes blob size falls monotonically with
	* quality. The first attempt's byte length is reported as the original size
	* (the raw frame has no canonical encoding to measure).
	*/
	async function compressToTarget(frame, encoder, targetBytes = TARGET_BYTES) {
		let originalSize = 0;
		let attempt = null;
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
			if (iterations === 1) originalSize = attempt.size;
			if (attempt.size <= targetBytes) return {
				mainBlob: attempt,
				mainQuality: q,
				originalSize,
				iterations
			};
		}
		return {
			mainBlob: attempt,
			mainQuality: quality,
			originalSize,
			iterations
		};
	}
	//#endregion
	//#region src/thumbnail.ts
	var THUMB_MAX_DIM = 300;
	var THUMB_QUALITY = .7;
	/** Round half up: the tie 0.5 always goes toward the larger dimension. */
	function roundHalfUp(value) {
		return Math.floor(value + .5);
	}
	/**
	* Aspect-preserving downscale so the longer side is at most the bound.
	* Never upscales; each dimension rounds half-up with a floor of one pixel.
	*/
	function thumbnailDimensions(width, height, maxDim = 300) {
		const scale = Math.min(1, maxDim / Math.max(width, height));
		return {
			width: Math.max(1, roundHalfUp(width * scale)),
			height: Math.max(1, roundHalfUp(height * scale))
		};
	}
	async function makeThumbnail(frame, scaler, encoder) {
		const dims = thumbnailDimensions(frame.width, frame.height);
		const scaled = scaler(frame, dims.width, dims.height);
		try {
			return await encoder(scaled, THUMB_QUALITY);
		} catch (err) {
			throw new CameraError("encode-failure", `thumbnail encode failed: ${String(err)}`);
		}
	}
	//#endregion
	//#region src/submit.ts
	/**
	* Multipart body matching the server's upload contract exactly:
	* photo, thumbnail, original_size, and optional lat/lng.
	*/
	function buildCaptureForm(result, thumb, gps) {
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
	/**
	* POST the capture to the task-completion endpoint as a hypermedia request;
	* the response fragment replaces the task card on success and is surfaced
	* verbatim on rejection. Transport failures become retryable network errors.
	*/
	async function submitCapture(fetchLike, endpoint, form) {
		let response;
		try {
			response = await fetchLike(endpoint, {
				method: "POST",
				body: form,
				headers: { "HX-Request": "true" },
				credentials: "same-origin"
			});
		} catch (err) {
			throw new CameraError("network-failure", `upload failed: ${String(err)}`);
		}
		const fragmentHtml = await response.text();
		return {
			ok: response.ok,
			status: response.status,
			fragmentHtml
		};
	}
	//#endregion
	//#region src/widget.ts
	/** Encode a canvas to a JPEG blob at the given quality. */
	function encodeCanvas(canvas, quality) {
		return new Promise((resolve, reject) => {
			canvas.toBlob((blob) => blob ? resolve(blob) : reject(/* @__PURE__ */ new Error("toBlob returned null")), "image/jpeg", quality);
		});
	}
	function scaleCanvas(canvas, width, height) {
		const scaled = document.createElement("canvas");
		scaled.width = width;
		scaled.height = height;
		scaled.getContext("2d")?.drawImage(canvas, 0, 0, width, height);
		return scaled;
	}
	function sampleGps() {
		return new Promise((resolve) => {
			if (!navigator.geolocation) {
				resolve(null);
				return;
			}
			navigator.geolocation.getCurrentPosition((position) => resolve({
				lat: position.coords.latitude,
				lng: position.coords.longitude
			}), () => resolve(null), {
				timeout: 4e3,
				maximumAge: 6e4
			});
		});
	}
	function swapTaskDetail(fragmentHtml) {
		const target = document.getElementById("task-detail");
		if (target) target.outerHTML = fragmentHtml;
	}
	function attachWidget(mount) {
		if (mount.dataset.cameraReady === "1") return;
		mount.dataset.cameraReady = "1";
		const endpoint = mount.dataset.endpoint ?? `/housekeeping/tasks/${mount.dataset.recordId}/complete`;
		const open = document.createElement("button");
		open.type = "button";
		open.className = "btn btn-sm btn-outline camera-open";
		open.textContent = "Use camera";
		const status = document.createElement("p");
		status.className = "camera-status text-muted";
		mount.append(open, status);
		let stream = null;
		const stop = () => {
			stream?.getTracks().forEach((track) => track.stop());
			stream = null;
		};
		open.addEventListener("click", async () => {
			try {
				stream = await acquireStream(navigator.mediaDevices);
			} catch (err) {
				status.textContent = err instanceof CameraError && err.code === "permission-denied" ? "Camera permission denied; use the file inputs below instead." : "No camera available; use the file inputs below instead.";
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
				drawGridOverlay(overlay);
			});
			await video.play();
			shutter.addEventListener("click", async () => {
				shutter.disabled = true;
				status.textContent = "Compressing…";
				try {
					const gps = await sampleGps();
					const frame = captureFrame(video, (w, h) => {
						const canvas = document.createElement("canvas");
						canvas.width = w;
						canvas.height = h;
						return canvas;
					}, stream !== null && stream.active);
					const result = await compressToTarget(frame, encodeCanvas);
					const thumb = await makeThumbnail(frame, scaleCanvas, encodeCanvas);
					status.textContent = `Uploading (${Math.round(result.mainBlob.size / 1024)} KB at q=${result.mainQuality.toFixed(2)})…`;
					const outcome = await submitCapture((url, init) => fetch(url, init), endpoint, buildCaptureForm(result, thumb, gps));
					if (outcome.ok) {
						stop();
						swapTaskDetail(outcome.fragmentHtml);
						return;
					}
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
	function attachAll(root = document) {
		root.querySelectorAll("[data-camera-capture]").forEach(attachWidget);
	}
	//#endregion
	//#region src/index.ts
	if (typeof document !== "undefined") {
		if (document.readyState === "loading") document.addEventListener("DOMContentLoaded", () => attachAll());
		else attachAll();
		document.body?.addEventListener("htmx:afterSettle", (event) => {
			const target = event.target;
			if (target instanceof HTMLElement) attachAll(target);
		});
	}
	//#endregion
	exports.CameraError = CameraError;
	exports.QUALITY_SCHEDULE = QUALITY_SCHEDULE;
	exports.STREAM_CONSTRAINTS = STREAM_CONSTRAINTS;
	exports.TARGET_BYTES = TARGET_BYTES;
	exports.THUMB_MAX_DIM = THUMB_MAX_DIM;
	exports.THUMB_QUALITY = THUMB_QUALITY;
	exports.acquireStream = acquireStream;
	exports.attachAll = attachAll;
	exports.attachWidget = attachWidget;
	exports.buildCaptureForm = buildCaptureForm;
	exports.captureFrame = captureFrame;
	exports.compressToTarget = compressToTarget;
	exports.drawGridOverlay = drawGridOverlay;
	exports.makeThumbnail = makeThumbnail;
	exports.submitCapture = submitCapture;
	exports.thumbnailDimensions = thumbnailDimensions;
	return exports;
})({});
