import { ClientOp, ServerEvent, parseEvent } from './protocol.js';

/** Anything that can carry protocol text both ways. */
export interface Transport {
  send(text: string): void;
  onMessage(cb: (text: string) => void): void;
}

export class WsTransport implements Transport {
  private ws: WebSocket;
  private cb: ((text: string) => void) | null = null;

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ws.onmessage = (ev) => this.cb?.(String(ev.data));
  }

  send(text: string): void {
    if (this.ws.readyState === WebSocket.CONNECTING) {
      this.ws.addEventListener('open', () => this.ws.send(text), { once: true });
    } else {
      this.ws.send(text);
    }
  }

  onMessage(cb: (text: string) => void): void {
    this.cb = cb;
  }
}

type Waiter = { msg: ClientOp; resolve: (ev: ServerEvent) => void };

/**
 * Request/reply client over a transport. The server answers every message
 * with exactly one event, in order; we keep at most one op in flight and
 * queue the rest so replies pair up without ids.
 */
export class SessionClient {
  private queue: Waiter[] = [];
  private inflight: Waiter | null = null;

  constructor(private transport: Transport) {
    transport.onMessage((text) => this.deliver(text));
  }

  request(msg: ClientOp): Promise<ServerEvent> {
    return new Promise((resolve) => {
      this.queue.push({ msg, resolve });
      this.pump();
    });
  }

  get busy(): boolean {
    return this.inflight !== null;
  }

  private pump(): void {
    if (this.inflight || this.queue.length === 0) return;
    this.inflight = this.queue.shift()!;
    this.transport.send(JSON.stringify(this.inflight.msg));
  }

  private deliver(text: string): void {
    const waiter = this.inflight;
    if (!waiter) return; // unsolicited; the protocol never does this
    this.inflight = null;
    waiter.resolve(parseEvent(text));
    this.pump();
  }
}
