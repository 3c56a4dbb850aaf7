/**
 * Thin client over the HTTP session API.
 *
 * Every call is recorded in `log`, so tests (and the curious) can
 * audit that everything shown in the UI was server-sourced. Mutations
 * return a discriminated result: 200 carries the new state plus its
 * exact response bytes; 409 carries the server's refusal.
 */

import {
  EnabledSets,
  NetDescription,
  StateJson,
  TraceInfo,
  decodeEnabled,
  decodeNet,
  decodeRefusal,
  decodeState,
  decodeTrace,
} from "./types.js";

export interface RequestEntry {
  method: "GET" | "POST";
  path: string;
  status: number;
}

export type MutationResult =
  | { ok: true; state: StateJson; raw: string }
  | { ok: false; error: string; action?: string; enabled?: EnabledSets };

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly path: string,
    body: string,
  ) {
    super(`${path} failed with ${status}: ${body.slice(0, 200)}`);
    this.name = "ApiError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Api {
  readonly log: RequestEntry[] = [];

  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<{ status: number; text: string }> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchFn(this.base + path, init);
    const text = await res.text();
    this.log.push({ method, path, status: res.status });
    return { status: res.status, text };
  }

  private async getJson(path: string): Promise<unknown> {
    const { status, text } = await this.request("GET", path);
    if (status !== 200) throw new ApiError(status, path, text);
    return JSON.parse(text);
  }

  async net(): Promise<NetDescription> {
    return decodeNet(await this.getJson("/net"));
  }

  async state(): Promise<{ state: StateJson; raw: string }> {
    const { status, text } = await this.request("GET", "/state");
    if (status !== 200) throw new ApiError(status, "/state", text);
    return { state: decodeState(JSON.parse(text)), raw: text };
  }

  async enabled(): Promise<EnabledSets> {
    return decodeEnabled(await this.getJson("/enabled"));
  }

  async trace(): Promise<TraceInfo> {
    return decodeTrace(await this.getJson("/trace"));
  }

  private async mutate(path: string, body?: unknown): Promise<MutationResult> {
    const { status, text } = await this.request("POST", path, body);
    if (status === 200) {
      return { ok: true, state: decodeState(JSON.parse(text)), raw: text };
    }
    if (status === 409) {
      const refusal = decodeRefusal(JSON.parse(text));
      return {
        ok: false,
        error: refusal.error,
        action: refusal.action,
        enabled: refusal.enabled,
      };
    }
    throw new ApiError(status, path, text);
  }

  fire(transition: string): Promise<MutationResult> {
    return this.mutate("/fire", { transition });
  }

  reverse(transition: string, mode: string): Promise<MutationResult> {
    return this.mutate("/reverse", { transition, mode });
  }

  undo(): Promise<MutationResult> {
    return this.mutate("/undo");
  }

  reset(): Promise<MutationResult> {
    return this.mutate("/reset");
  }
}
