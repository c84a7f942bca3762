/** Thin typed client for the copath service. */

import type { DeltaDoc, SessionState, SolutionDoc, WhatIfResponse } from "./types.js";

export class ApiFailure extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly details?: unknown,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const code = body && typeof body === "object" && "code" in body
      ? String((body as { code: unknown }).code) : "http-error";
    const message = body && typeof body === "object" && "message" in body
      ? String((body as { message: unknown }).message) : response.statusText;
    const details = body && typeof body === "object" && "details" in body
      ? (body as { details: unknown }).details : undefined;
    throw new ApiFailure(response.status, code, message, details);
  }
  return body as T;
}

export class Client {
  constructor(private readonly base: string) {}

  createSession(instance: unknown): Promise<{ session_id: string }> {
    return request(`${this.base}/api/sessions`, {
      method: "POST",
      body: JSON.stringify(instance),
    });
  }

  getState(sessionId: string): Promise<SessionState> {
    return request(`${this.base}/api/sessions/${sessionId}`);
  }

  solve(sessionId: string, options: { strategy?: string; timeout?: number } = {}):
      Promise<SolutionDoc> {
    return request(`${this.base}/api/sessions/${sessionId}/solve`, {
      method: "POST",
      body: JSON.stringify(options),
    });
  }

  whatif(sessionId: string, delta: DeltaDoc): Promise<WhatIfResponse> {
    return request(`${this.base}/api/sessions/${sessionId}/whatif`, {
      method: "POST",
      body: JSON.stringify(delta),
    });
  }
}
