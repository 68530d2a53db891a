import { ServerEvent } from './protocol.js';

export interface RealtimeBody {
  source: string;
  seed: number;
  edit: number;
}

/** POSTs one body to /realtime and resolves with the reply event. */
export type Poster = (body: RealtimeBody) => Promise<ServerEvent>;

/**
 * Debounced re-run loop for real-time mode. Each edit restarts a short
 * timer; when it fires the current source is posted. Requests carry a
 * monotonically increasing edit counter, and any reply that is not for
 * the newest edit is dropped, so a slow response never overwrites the
 * result of a later keystroke.
 */
export class RealtimeLoop {
  private counter = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private active = false;

  constructor(
    private post: Poster,
    private apply: (ev: ServerEvent) => void,
    readonly delayMs = 300,
  ) {}

  start(): void {
    this.active = true;
  }

  stop(): void {
    this.active = false;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
  }

  get pending(): boolean {
    return this.timer !== null;
  }

  edit(source: string, seed: number): void {
    if (!this.active) return;
    const edit = ++this.counter;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.post({ source, seed, edit }).then((ev) => {
        if (this.active && edit === this.counter) this.apply(ev);
      });
    }, this.delayMs);
  }
}
