// Canvas viewer: hover for a live contour, adjust the template, place
// helper seeds, commit, and read metrics against a ground-truth mask.
//
// Rendering stays a pure view of the protocol: contour vertices are drawn
// exactly at the reply coordinates (scaled by the integer zoom), never
// smoothed or resampled.

import { PointerCoalescer, SegmentationClient } from "./client.js";
import { HelperKind, ResultMessage } from "./protocol.js";
import { rleToMask } from "./rle.js";

interface CommittedOverlay {
  contour: [number, number][];
  seed: { x: number; y: number };
}

export class Viewer {
  private zoom = 2;
  private bitmap: ImageBitmap | null = null;
  private live: ResultMessage | null = null;
  private committedOverlays: CommittedOverlay[] = [];
  private committedMask: Uint8Array | null = null;
  private helperMode: HelperKind | null = null;
  private helpers: { x: number; y: number; kind: HelperKind }[] = [];
  private coalescer: PointerCoalescer;

  constructor(
    private client: SegmentationClient,
    private canvas: HTMLCanvasElement,
    private ui: {
      banner: HTMLElement;
      stats: HTMLElement;
      metricsOut: HTMLElement;
      collapsedBadge: HTMLElement;
    },
  ) {
    this.coalescer = new PointerCoalescer(
      (seed) => this.client.hover(seed.x, seed.y),
      (cb) => requestAnimationFrame(cb),
    );
    client.events.onResult = (msg) => {
      this.live = msg;
      this.draw();
    };
    client.events.onConnectionLost = () => {
      this.ui.banner.style.display = "block"; // overlays stay frozen as drawn
    };
    canvas.addEventListener("pointermove", (ev) => {
      if (!this.bitmap || this.helperMode) return;
      const { x, y } = this.toImage(ev);
      if (this.inImage(x, y)) this.coalescer.move(x, y);
    });
    canvas.addEventListener("click", (ev) => {
      const { x, y } = this.toImage(ev);
      if (!this.inImage(x, y)) return;
      if (this.helperMode) void this.addHelper(x, y, this.helperMode);
    });
  }

  private toImage(ev: MouseEvent): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    return {
      x: (ev.clientX - rect.left) / this.zoom,
      y: (ev.clientY - rect.top) / this.zoom,
    };
  }

  private inImage(x: number, y: number): boolean {
    return x >= 0 && y >= 0 && x < this.client.imageWidth && y < this.client.imageHeight;
  }

  async loadFile(file: File): Promise<void> {
    const buf = new Uint8Array(await file.arrayBuffer());
    let b64 = "";
    for (let i = 0; i < buf.length; i += 0x8000) {
      b64 += String.fromCharCode(...buf.subarray(i, i + 0x8000));
    }
    await this.client.load({ pngBase64: btoa(b64) });
    this.bitmap = await createImageBitmap(new Blob([buf]));
    this.live = null;
    this.committedOverlays = [];
    this.committedMask = null;
    this.resize();
  }

  setZoom(zoom: number): void {
    this.zoom = Math.max(1, Math.round(zoom));
    this.resize();
  }

  setHelperMode(mode: HelperKind | null): void {
    this.helperMode = mode;
  }

  private async addHelper(x: number, y: number, kind: HelperKind): Promise<void> {
    await this.client.addHelper(x, y, kind);
    this.helpers.push({ x, y, kind });
    if (this.live) this.client.resegment(this.live.seed); // re-run at the live seed
    this.draw();
  }

  async clearHelpers(): Promise<void> {
    await this.client.clearHelpers();
    this.helpers = [];
    if (this.live) this.client.resegment(this.live.seed);
    this.draw();
  }

  async commit(): Promise<boolean> {
    if (!this.live) return false; // nothing live: no-op with a hint
    const reply = await this.client.commit(true);
    this.committedOverlays.push({ contour: this.live.contour, seed: this.live.seed });
    this.committedMask = reply.mask_rle
      ? rleToMask(reply.mask_rle, reply.width, reply.height)
      : null;
    this.draw();
    return true;
  }

  /** PNG blob of the last committed mask (0/255), for download. */
  async exportMask(): Promise<Blob | null> {
    if (!this.committedMask) return null;
    const w = this.client.imageWidth;
    const h = this.client.imageHeight;
    const off = document.createElement("canvas");
    off.width = w;
    off.height = h;
    const ctx = off.getContext("2d")!;
    const img = ctx.createImageData(w, h);
    for (let i = 0; i < w * h; i++) {
      const v = this.committedMask[i] ? 255 : 0;
      img.data.set([v, v, v, 255], 4 * i);
    }
    ctx.putImageData(img, 0, 0);
    return new Promise((resolve) => off.toBlob(resolve, "image/png"));
  }

  async showMetrics(gtPath: string): Promise<void> {
    const m = await this.client.metrics(gtPath);
    const dsc = m.dsc === null ? "n/a" : (100 * m.dsc).toFixed(1) + " %";
    const hd = m.hd_px === null ? "n/a" : m.hd_px.toFixed(2) + " px";
    this.ui.metricsOut.textContent = `DSC ${dsc}   HD ${hd}`;
  }

  private resize(): void {
    this.canvas.width = this.client.imageWidth * this.zoom;
    this.canvas.height = this.client.imageHeight * this.zoom;
    this.draw();
  }

  private dot(ctx: CanvasRenderingContext2D, x: number, y: number,
              radius: number, color: string): void {
    ctx.fillStyle = color;
    ctx.beginPath();
    ctx.arc(x * this.zoom, y * this.zoom, radius, 0, 2 * Math.PI);
    ctx.fill();
  }

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.imageSmoothingEnabled = false;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    if (this.bitmap) {
      ctx.drawImage(this.bitmap, 0, 0, this.canvas.width, this.canvas.height);
    }
    for (const overlay of this.committedOverlays) {
      for (const [x, y] of overlay.contour) this.dot(ctx, x, y, 2, "#ffcc00");
      this.dot(ctx, overlay.seed.x, overlay.seed.y, 3, "#ffffff");
    }
    for (const h of this.helpers) {
      this.dot(ctx, h.x, h.y, 3, h.kind === "inside" ? "#00ff66" : "#3399ff");
    }
    if (this.live) {
      for (const [x, y] of this.live.contour) this.dot(ctx, x, y, 2, "#ff2222");
      this.dot(ctx, this.live.seed.x, this.live.seed.y, 3, "#ffffff");
      this.ui.collapsedBadge.style.display = this.live.collapsed ? "inline" : "none";
      this.ui.stats.textContent =
        `cut ${this.live.cut_cost.toFixed(1)}  ` +
        `${(this.live.elapsed_us / 1000).toFixed(1)} ms  seq ${this.live.seq}`;
    }
  }
}
