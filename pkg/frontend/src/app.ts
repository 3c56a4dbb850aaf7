/**
 * Controller: owns the current ViewState, serializes mutations through
 * a queue, and re-renders after every server round trip. Every piece
 * of displayed data originates from a server response; refusals (409)
 * become the banner, never a local guess.
 */

import { Api, ApiError, MutationResult } from "./api.js";
import { topologicalColumns } from "./layout.js";
import { MutationQueue } from "./queue.js";
import { Mode } from "./types.js";
import { Handlers, render, ViewState } from "./view.js";

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return `server error ${err.status} on ${err.path}`;
  }
  if (err instanceof Error) return err.message;
  return String(err);
}

export class App {
  private readonly queue = new MutationQueue();
  private readonly handlers: Handlers;

  private constructor(
    private readonly root: HTMLElement,
    private readonly api: Api,
    private view: ViewState,
  ) {
    this.handlers = {
      act: (transition, direction, mode) => this.act(transition, direction, mode),
      undo: () => this.mutate(() => this.api.undo()),
      reset: () => this.mutate(() => this.api.reset()),
    };
  }

  static async boot(opts: { root: HTMLElement; api: Api }): Promise<App> {
    const net = await opts.api.net();
    const { state, raw } = await opts.api.state();
    const [enabled, trace] = await Promise.all([
      opts.api.enabled(),
      opts.api.trace(),
    ]);
    const app = new App(opts.root, opts.api, {
      net,
      columns: topologicalColumns(net),
      state,
      raw,
      enabled,
      trace,
      banner: null,
    });
    app.draw();
    return app;
  }

  /** Resolves once every mutation queued so far has been processed. */
  settled(): Promise<void> {
    return this.queue.settled();
  }

  private act(
    transition: string,
    direction: "forward" | "reverse",
    mode?: Mode,
  ): void {
    this.mutate(() =>
      direction === "forward"
        ? this.api.fire(transition)
        : this.api.reverse(transition, mode ?? "co"),
    );
  }

  private mutate(send: () => Promise<MutationResult>): void {
    void this.queue.push(async () => {
      try {
        const result = await send();
        if (result.ok) {
          this.view.state = result.state;
          this.view.raw = result.raw;
          this.view.banner = null;
        } else {
          this.view.banner = result.action
            ? `${result.error} — ${result.action}`
            : result.error;
        }
        await this.refreshDerived();
      } catch (err) {
        this.view.banner = describe(err);
      }
      this.draw();
    });
  }

  private async refreshDerived(): Promise<void> {
    const [enabled, trace] = await Promise.all([
      this.api.enabled(),
      this.api.trace(),
    ]);
    this.view.enabled = enabled;
    this.view.trace = trace;
  }

  private draw(): void {
    render(this.root, this.view, this.handlers);
  }
}
