/**
 * Collapses bursts of settings changes into at most one request in flight
 * plus one queued.
 *
 * Scheduling while idle runs the task (after an optional debounce delay
 * for slider drags). Scheduling while busy replaces the queued task, so a
 * burst settles on the newest settings: last write wins, intermediate
 * values are never sent.
 */

export type Task = () => Promise<void>;

export class RequestScheduler {
  private inFlight = false;
  private queued: Task | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private idleWaiters: (() => void)[] = [];

  constructor(private debounceMs = 0) {}

  get busy(): boolean {
    return this.inFlight || this.queued !== null || this.timer !== null;
  }

  schedule(task: Task): void {
    if (this.debounceMs > 0) {
      if (this.timer !== null) clearTimeout(this.timer);
      this.timer = setTimeout(() => {
        this.timer = null;
        this.dispatch(task);
      }, this.debounceMs);
      return;
    }
    this.dispatch(task);
  }

  /** Resolves once nothing is running, queued, or debouncing. */
  settled(): Promise<void> {
    if (!this.busy) return Promise.resolve();
    return new Promise((resolve) => this.idleWaiters.push(resolve));
  }

  private dispatch(task: Task): void {
    if (this.inFlight) {
      this.queued = task;
      return;
    }
    this.run(task);
  }

  private run(task: Task): void {
    this.inFlight = true;
    task()
      .catch(() => {
        // Task owns its error reporting; the pipeline must keep draining.
      })
      .finally(() => {
        this.inFlight = false;
        const next = this.queued;
        this.queued = null;
        if (next !== null) {
          this.run(next);
        } else if (this.timer === null) {
          const waiters = this.idleWaiters;
          this.idleWaiters = [];
          for (const resolve of waiters) resolve();
        }
      });
  }
}
