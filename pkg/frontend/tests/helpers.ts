import { readFileSync } from 'node:fs';
import { resolve } from 'node:path';
import { Transport } from '../src/client.js';
import { ClientOp, ServerEvent } from '../src/protocol.js';
import { Poster, RealtimeBody } from '../src/realtime.js';

export interface RecordedPair {
  send: ClientOp;
  recv: ServerEvent;
}

export interface Recording {
  source: string;
  pairs: RecordedPair[];
}

export function loadRecording(name: string): Recording {
  const path = resolve(process.cwd(), 'tests/fixtures', name);
  return JSON.parse(readFileSync(path, 'utf-8')) as Recording;
}

function stable(value: unknown): string {
  return JSON.stringify(value, (_k, v) => {
    if (v && typeof v === 'object' && !Array.isArray(v)) {
      const sorted: Record<string, unknown> = {};
      for (const key of Object.keys(v).sort()) sorted[key] = (v as Record<string, unknown>)[key];
      return sorted;
    }
    return v;
  });
}

/**
 * Transport that answers from a recording. Each sent message consumes the
 * first unconsumed pair whose send matches it structurally; anything the
 * recording does not contain is a test failure surfaced via `misses`.
 */
export class ReplayTransport implements Transport {
  sent: ClientOp[] = [];
  misses: string[] = [];
  private used: boolean[];
  private cb: ((text: string) => void) | null = null;

  constructor(private pairs: RecordedPair[]) {
    this.used = pairs.map(() => false);
  }

  send(text: string): void {
    const msg = JSON.parse(text) as ClientOp;
    this.sent.push(msg);
    const key = stable(msg);
    for (let i = 0; i < this.pairs.length; i++) {
      if (!this.used[i] && stable(this.pairs[i].send) === key) {
        this.used[i] = true;
        const reply = JSON.stringify(this.pairs[i].recv);
        queueMicrotask(() => this.cb?.(reply));
        return;
      }
    }
    this.misses.push(key);
    const reply = JSON.stringify({ ev: 'error', code: 'fixture_miss', message: key });
    queueMicrotask(() => this.cb?.(reply));
  }

  onMessage(cb: (text: string) => void): void {
    this.cb = cb;
  }

  get remaining(): number {
    return this.used.filter((u) => !u).length;
  }
}

/** Transport for tests where the session socket must stay silent. */
export class ForbiddenTransport implements Transport {
  sent: string[] = [];
  send(text: string): void {
    this.sent.push(text);
  }
  onMessage(): void {}
}

export function manualPoster(): {
  post: Poster;
  calls: { body: RealtimeBody; resolve: (ev: ServerEvent) => void }[];
} {
  const calls: { body: RealtimeBody; resolve: (ev: ServerEvent) => void }[] = [];
  const post: Poster = (body) =>
    new Promise<ServerEvent>((resolve) => {
      calls.push({ body, resolve });
    });
  return { post, calls };
}

export function tick(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
