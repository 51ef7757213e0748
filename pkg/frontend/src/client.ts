// Connection state machine for the interactive segmentation protocol.
//
// The client never mutates segmentation data: replies are parsed and handed
// to the render callback as-is. Hover requests keep at most one request
// outstanding; newer positions overwrite the pending slot and go out as
// soon as the previous reply lands. Replies with a sequence number at or
// below the newest rendered one are discarded, so rendering is monotone in
// seq even if the transport reorders anything.

import {
  DEFAULT_PARAMS,
  ErrorMessage,
  HelperKind,
  ResultMessage,
  Seed,
  ServerMessage,
  TemplateParams,
  parseServerMessage,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((data: string) => void) | null;
  onclose: (() => void) | null;
}

export interface ClientEvents {
  onResult?: (msg: ResultMessage) => void;
  onConnectionLost?: () => void;
  onError?: (msg: ErrorMessage) => void;
  onReply?: (msg: ServerMessage) => void;
}

export class SegmentationClient {
  session: string | null = null;
  imageWidth = 0;
  imageHeight = 0;
  params: TemplateParams = { ...DEFAULT_PARAMS };
  connected = true;
  lastRenderedSeq = -1;
  requestsSent = 0;

  private seqCounter = 0;
  private outstanding = false;
  private pendingSeed: Seed | null = null;
  private waiters: ((msg: ServerMessage) => boolean)[] = [];

  constructor(private sock: SocketLike, readonly events: ClientEvents = {}) {
    sock.onmessage = (data) => this.handleRaw(data);
    sock.onclose = () => {
      this.connected = false;
      this.events.onConnectionLost?.();
    };
  }

  private send(obj: Record<string, unknown>): void {
    this.sock.send(JSON.stringify(obj));
  }

  /** Resolves with the next reply matching the predicate (for one-shot
   * request/ack flows; segment replies stream through onResult instead). */
  private nextReply<T extends ServerMessage>(
    match: (msg: ServerMessage) => boolean,
  ): Promise<T> {
    return new Promise((resolve) => {
      this.waiters.push((msg) => {
        if (!match(msg)) return false;
        resolve(msg as T);
        return true;
      });
    });
  }

  private handleRaw(data: string): void {
    const msg = parseServerMessage(data);
    if (!msg) return;
    this.events.onReply?.(msg);
    if (msg.type === "result") {
      this.outstanding = false;
      if (msg.seq <= this.lastRenderedSeq) {
        this.flushPending();
        return; // stale reply, never rendered
      }
      this.lastRenderedSeq = msg.seq;
      this.events.onResult?.(msg);
      this.flushPending();
      return;
    }
    if (msg.type === "error") {
      if (typeof msg.seq === "number") {
        this.outstanding = false;
        this.flushPending();
      }
      this.events.onError?.(msg);
    }
    for (let i = 0; i < this.waiters.length; i++) {
      if (this.waiters[i](msg)) {
        this.waiters.splice(i, 1);
        break;
      }
    }
  }

  private flushPending(): void {
    if (this.pendingSeed && !this.outstanding) {
      const seed = this.pendingSeed;
      this.pendingSeed = null;
      this.sendSegment(seed);
    }
  }

  private sendSegment(seed: Seed, wantMask = false): number {
    const seq = ++this.seqCounter;
    this.outstanding = true;
    this.requestsSent++;
    this.send({
      type: "segment",
      session: this.session,
      seq,
      seed,
      params: this.params,
      want_mask: wantMask || undefined,
    });
    return seq;
  }

  /** Hover entry point: keeps one request in flight, coalesces the rest. */
  hover(x: number, y: number): void {
    if (!this.session || !this.connected) return;
    if (this.outstanding) {
      this.pendingSeed = { x, y };
    } else {
      this.sendSegment({ x, y });
    }
  }

  /** Re-segment the current seed immediately (after helper changes). */
  resegment(seed: Seed): void {
    if (!this.session) return;
    if (this.outstanding) {
      this.pendingSeed = seed;
    } else {
      this.sendSegment(seed);
    }
  }

  async load(source: { path?: string; pngBase64?: string }): Promise<void> {
    this.send(
      source.path !== undefined
        ? { type: "load", path: source.path }
        : { type: "load", png_base64: source.pngBase64 },
    );
    const reply = await this.nextReply<ServerMessage>(
      (m) => m.type === "loaded" || m.type === "error",
    );
    if (reply.type === "error") throw new Error(reply.detail);
    if (reply.type === "loaded") {
      this.session = reply.session;
      this.imageWidth = reply.width;
      this.imageHeight = reply.height;
    }
  }

  async setParams(params: Partial<TemplateParams>): Promise<TemplateParams> {
    this.params = { ...this.params, ...params };
    this.send({ type: "set_params", session: this.session, params: this.params });
    const reply = await this.nextReply<ServerMessage>(
      (m) => m.type === "params_set" || m.type === "error",
    );
    if (reply.type === "error") throw new Error(reply.detail);
    return (reply as { params: TemplateParams }).params;
  }

  async addHelper(x: number, y: number, kind: HelperKind): Promise<number> {
    this.send({ type: "add_helper", session: this.session, x, y, kind });
    const reply = await this.nextReply<ServerMessage>(
      (m) => m.type === "helper_added" || m.type === "error",
    );
    if (reply.type === "error") throw new Error(reply.detail);
    return (reply as { count: number }).count;
  }

  async clearHelpers(): Promise<void> {
    this.send({ type: "clear_helpers", session: this.session });
    await this.nextReply((m) => m.type === "helpers_cleared" || m.type === "error");
  }

  async commit(wantMask = true) {
    this.send({ type: "commit", session: this.session, want_mask: wantMask });
    const reply = await this.nextReply<ServerMessage>(
      (m) => m.type === "committed" || m.type === "error",
    );
    if (reply.type === "error") throw new Error(reply.detail);
    return reply as Extract<ServerMessage, { type: "committed" }>;
  }

  async metrics(gtPath: string) {
    this.send({ type: "metrics", session: this.session, gt_path: gtPath });
    const reply = await this.nextReply<ServerMessage>(
      (m) => m.type === "metrics" || m.type === "error",
    );
    if (reply.type === "error") throw new Error(reply.detail);
    return reply as Extract<ServerMessage, { type: "metrics" }>;
  }

  close(): void {
    this.sock.close();
  }
}

/**
 * Rate-limits pointer positions to the display refresh: any number of moves
 * per frame collapse into one callback with the newest position. The frame
 * scheduler is injected (requestAnimationFrame in the browser, a manual
 * tick in tests).
 */
export class PointerCoalescer {
  private latest: Seed | null = null;
  private scheduled = false;

  constructor(
    private emit: (seed: Seed) => void,
    private requestFrame: (cb: () => void) => void,
  ) {}

  move(x: number, y: number): void {
    this.latest = { x, y };
    if (this.scheduled) return;
    this.scheduled = true;
    this.requestFrame(() => {
      this.scheduled = false;
      if (this.latest) {
        const seed = this.latest;
        this.latest = null;
        this.emit(seed);
      }
    });
  }
}
